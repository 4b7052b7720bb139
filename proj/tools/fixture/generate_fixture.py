#!/usr/bin/env python3
"""Regenerates data/fixture/kb.json and data/catalogs/*.json.

Treatment and class lists follow the published curation tables. Prose facets
that were not published are written as placeholder text and say so.
"""
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parents[2]

REF_CTGOV = {"title": "ClinicalTrials.gov", "url": "https://clinicaltrials.gov/"}
REF_ICTRP = {"title": "WHO International Clinical Trials Registry Platform",
             "url": "https://www.who.int/tools/clinical-trials-registry-platform/the-ictrp-search-portal"}
REF_LASV_RBV = {"title": "Ribavirin for the treatment of Lassa fever: A systematic review and meta-analysis",
                "url": "https://doi.org/10.1016/j.ijid.2019.07.015"}
REF_LASV_RBV2 = {"title": "Time to reconsider the role of ribavirin in Lassa fever",
                 "url": "https://doi.org/10.1371/journal.pntd.0009522"}
REF_NIV_REVIEW = {"title": "Therapeutics for Nipah virus disease: a systematic review to support prioritisation of drug candidates for clinical trials",
                  "url": "https://doi.org/10.1016/j.lanmic.2024.101002"}
REF_NIV_M102 = {"title": "A neutralizing human monoclonal antibody protects against lethal disease in a new ferret model of acute nipah virus infection",
                "url": "https://doi.org/10.1371/journal.ppat.1000642"}
REF_VEEV = {"title": "Advances in the Development of Small Molecule Antivirals against Equine Encephalitic Viruses",
            "url": "https://doi.org/10.3390/v15020413"}
REF_TOX_1 = {"title": "Marine Algal Toxins and Public Health: Insights from Shellfish and Fish, the Main Biological Vectors",
             "url": "https://doi.org/10.3390/md22110510"}
REF_TOX_2 = {"title": "Current Trends and New Challenges in Marine Phycotoxins",
             "url": "https://doi.org/10.3390/md20030198"}
REF_TOX_3 = {"title": "Phycotoxins in Marine Shellfish: Origin, Occurrence and Effects on Humans",
             "url": "https://doi.org/10.3390/md16060188"}
REF_CONO_1 = {"title": "Prediction of Specificity of alpha-Conotoxins to Subtypes of Human Nicotinic Acetylcholine Receptors with Semi-Supervised Machine Learning",
              "url": "https://doi.org/10.1021/acschemneuro.4c00760"}
REF_CONO_2 = {"title": "Conopeptide characterization and classifications: An analysis using ConoServer",
              "url": "https://doi.org/10.1016/j.toxicon.2010.03.002"}
REF_CONO_3 = {"title": "ConoServer: updated content, knowledge, and discovery tools in the conopeptide database"}

PLACEHOLDER = "Fixture placeholder text; see references."

KNOWN_MECHANISMS = {
    "Ribavirin": ("Guanosine nucleoside analogue with broad-spectrum activity against RNA viruses.", "Small-molecule antiviral (repurposed)"),
    "Ribavirin (IV)": ("Guanosine nucleoside analogue with broad-spectrum activity against RNA viruses.", "Small-molecule antiviral (repurposed), intravenous"),
    "Favipiravir": ("Prodrug whose ribosylated triphosphate inhibits the viral RNA-dependent RNA polymerase.", "Small-molecule antiviral (repurposed)"),
    "Remdesivir": ("Adenosine nucleotide analogue prodrug that inhibits the viral RNA-dependent RNA polymerase.", "Small-molecule antiviral (repurposed)"),
    "Galidesivir": ("Adenosine nucleoside analogue that inhibits the viral RNA-dependent RNA polymerase.", "Small-molecule antiviral (investigational)"),
    "Inmazeb": ("Three-antibody cocktail binding the Ebola virus glycoprotein.", "Monoclonal antibody cocktail (approved)"),
    "Ebanga": ("Single human monoclonal antibody binding the Ebola virus glycoprotein.", "Monoclonal antibody (approved)"),
    "ZMapp": ("Cocktail of three chimeric monoclonal antibodies against the Ebola virus glycoprotein.", "Monoclonal antibody cocktail (investigational)"),
    "m102.4": ("Human monoclonal antibody binding the henipavirus G attachment glycoprotein.", "Monoclonal antibody (investigational)"),
}

VIRUSES = [
    {
        "id": "lasv", "name": "Lassa virus", "abbreviation": "LASV",
        "aliases": ["lassa", "lassa fever", "lassa virus"],
        "refs": [REF_LASV_RBV, REF_LASV_RBV2],
        "pathogen_targeted": ["Arevirumab-3", "Favipiravir", "LHF-535", "Ribavirin (IV)", "ST-193"],
        "host_targeted": ["25-Hydroxycholesterol", "PF-429242", "PRTX007"],
        "combinatorial": ["Arevirumab-3 + Favipiravir", "Dexamethasone + Ribavirin", "LHF-535 + Favipiravir",
                          "Ribavirin + Favipiravir", "Ribavirin + LHF-535"],
    },
    {
        "id": "marv", "name": "Marburg virus", "abbreviation": "MARV",
        "aliases": ["marburg", "marburg virus", "marburg virus disease"],
        "refs": [REF_CTGOV, REF_ICTRP],
        "pathogen_targeted": ["AVI-7288 phosphorodiamidate morpholino oligomer", "Favipiravir", "Galidesivir", "MBP091",
                              "MR186-YTE monoclonal antibody", "MR191-N monoclonal antibody", "NP-718m-LNP",
                              "Remdesivir", "siRNA-LNP therapy"],
        "host_targeted": ["Infection prevention & control", "Supportive critical care"],
        "combinatorial": ["MR186-YTE + remdesivir"],
    },
    {
        "id": "ebov", "name": "Zaire ebolavirus", "abbreviation": "EBOV",
        "aliases": ["ebola", "ebola virus", "ebola virus disease", "zaire ebolavirus", "ebolavirus"],
        "refs": [REF_CTGOV, REF_ICTRP],
        "pathogen_targeted": ["AVI-7537", "Ebanga", "Favipiravir", "Inmazeb", "Remdesivir", "TKM-130803", "ZMapp"],
        "host_targeted": ["Convalescent plasma", "Optimized supportive/critical care bundle"],
        "combinatorial": ["Convalescent plasma + supportive care", "Monoclonal antibody + optimized supportive care"],
    },
    {
        "id": "niv", "name": "Nipah virus", "abbreviation": "NiV",
        "aliases": ["nipah", "nipah virus", "niv"],
        "refs": [REF_NIV_REVIEW],
        "pathogen_targeted": ["Defective-interfering particles", "Engineered soluble ephrin-B2 decoy receptor", "Favipiravir",
                              "Fusion-inhibitory lipopeptides", "HENV-103 + HENV-117", "hu1F5 / MBP1F5",
                              "Lumicitabine / ALS-8112", "m102.4", "Remdesivir", "Ribavirin"],
        "host_targeted": ["Infection prevention & control", "Public-health measures", "Supportive critical care"],
        "combinatorial": ["Early mAb + remdesivir", "PEP for high-risk contacts: m102.4 + contact tracing"],
    },
    {
        "id": "veev", "name": "Venezuelan equine encephalitis virus", "abbreviation": "VEEV",
        "aliases": ["venezuelan equine encephalitis", "venezuelan equine encephalitis virus"],
        "refs": [REF_VEEV],
        "pathogen_targeted": ["BDGR-164", "BDGR-4", "BDGR-49", "c1A3B-7", "Hu-1A4A-1-YTE", "ML336 and derivatives",
                              "Neutralizing monoclonal antibodies targeting E2", "VEEV nsP2 protease inhibitors",
                              "β-D-N4-hydroxycytidine / Molnupiravir"],
        "host_targeted": ["General infection prevention & control (IPC) in healthcare",
                          "Neurocritical care & supportive management for viral encephalitis",
                          "Type I interferon therapy"],
        "combinatorial": [],
    },
]

NIV_NATIVE = {
    "survival_figures": [
        {"panel_label": "Panel A", "description": "Survival rates following NIV infections in hamsters",
         "source_url": "https://journals.asm.org/doi/epub/10.1128/mbio.03294-21"},
        {"panel_label": "Panel B", "description": "Survival rates following NIV infections in macaques",
         "source_url": "https://journals.plosone.org/plosone/article?id=10.1371/journal.pone.0117817"},
    ],
    "viremia_figures": [
        {"panel_label": "Panel C", "description": "Viremia following NIV infections in macaques",
         "source_url": "https://journals.plosone.org/plosone/article?id=10.1371/journal.pone.0010690"},
    ],
    "references": [
        {"title": "Survival rates following NIV infections in hamsters",
         "url": "https://journals.asm.org/doi/epub/10.1128/mbio.03294-21"},
        {"title": "Survival rates following NIV infections in macaques",
         "url": "https://journals.plosone.org/plosone/article?id=10.1371/journal.pone.0117817"},
        {"title": "Viremia following NIV infections in macaques",
         "url": "https://journals.plosone.org/plosone/article?id=10.1371/journal.pone.0010690"},
    ],
}

NIV_EVIDENCE = [
    {
        "countermeasure": "Ribavirin",
        "benefit_summary": "Observed lower case fatality in Malaysia open-label comparison: 32% vs 54% (absolute -22%; reported 36% reduction). No CI reported; causality uncertain.",
        "quantified": {"treated_cfr": 0.32, "control_cfr": 0.54, "reported": "reported 36% reduction"},
        "evidence_strength": "low",
        "rationale_facts": ["Only treatment in the pack with Malaysia outbreak mortality signal, but evidence is open-label/historical control and later CDC summary states efficacy is unclear."],
        "constraints": "Used during 1998–1999 Malaysian outbreak; efficacy uncertain in later summaries.",
        "sources": [{"title": "Treatment of acute Nipah encephalitis with ribavirin - PubMed"},
                    {"title": "Nipah virus: Facts for Clinicians | CDC (ribavirin note)"}],
    },
    {
        "countermeasure": "Supportive critical care",
        "benefit_summary": "WHO states high-quality supportive medical care can prevent deaths; expected benefit depends on severity and ICU capacity.",
        "evidence_strength": "low",
        "rationale_facts": ["Guideline-level recommendations indicate supportive ICU care can prevent deaths in Nipah, but no Malaysia-specific or quantified mortality effect is provided in the EvidencePack."],
        "constraints": "High-quality supportive care (ICU-level as needed; oxygen, ventilation, organ support, hydration/nutrition, complication management).",
        "sources": [{"title": "Nipah virus fact sheet (Treatment section)"},
                    {"title": "Nipah virus: Facts for Clinicians | CDC (Treatment and recovery)"}],
    },
    {
        "countermeasure": "m102.4",
        "benefit_summary": "Human evidence in pack is phase 1 safety/PK in healthy adults; clinical efficacy in Nipah patients (Malaysia or elsewhere) not established here.",
        "evidence_strength": "insufficient",
        "rationale_facts": ["Investigational therapy with human safety data and reported compassionate use status, but no patient efficacy or mortality outcomes in the provided sources; generalizability to Malaysia cases unknown."],
        "constraints": "Human monoclonal antibody; investigational; compassionate use reported; phase 1 safety data.",
        "sources": [{"title": "Safety, tolerability, pharmacokinetics, and immunogenicity of m102.4 in healthy adults: phase 1 study - PubMed"},
                    {"title": "Nipah virus: Facts for Clinicians | CDC (m102.4 status)"}],
    },
]

CONO_AIRWAY = "Airway management and ventilatory support (early if weakness develops)"
CONO_SUPPORT = "Supportive care with close monitoring for neuromuscular weakness"

CONO_EVIDENCE = [
    {
        "countermeasure": CONO_AIRWAY,
        "benefit_summary": "Highest expected mortality reduction by preventing hypoxia and sustaining life during paralysis/diaphragm failure; bridges until toxin effects resolve.",
        "evidence_strength": "expert_guideline",
        "rationale_facts": ["Cone-snail envenomation can rapidly progress to flaccid paralysis with respiratory muscle failure; early airway/ventilation is highlighted as critical in severe cases."],
        "constraints": "",
        "sources": [{"title": "Dataset excerpt: airway/ventilation preparedness"}],
    },
    {
        "countermeasure": CONO_SUPPORT,
        "benefit_summary": "Reduces severe morbidity/mortality by enabling early detection and timely escalation to ventilation; may reduce complications from delayed respiratory support.",
        "evidence_strength": "expert_guideline",
        "rationale_facts": ["Close monitoring is recommended due to risk of rapid neuromuscular decline; its main value is triggering prompt airway/ventilatory support when weakness emerges."],
        "constraints": "",
        "sources": [{"title": "Dataset excerpt: supportive care/monitoring"}],
    },
]

SUPPORTIVE = "Supportive care"
VENT = "Respiratory support and mechanical ventilation when indicated"
DECON = "Removal of unabsorbed toxin (e.g., activated charcoal) when clinically appropriate"

# (id, name, abbreviation, aliases, classes, defaults, biothreat)
FAMILIES = [
    ("conotoxins", "Conotoxins", "CTX", ["conotoxin", "conotoxins", "cone snail venom", "cone snail"],
     ["α-conotoxins", "ω-conotoxins", "μ-conotoxins", "μO-conotoxins", "κ-conotoxins",
      "δ-conotoxins", "ι-conotoxins", "Conantokins", "χ-conopeptides", "ρ-conotoxins"],
     {"source_organisms": ["Marine cone snails (genus Conus)"], "exposure_syndromes": ["Cone snail envenomation"],
      "countermeasures": [CONO_AIRWAY, CONO_SUPPORT], "refs": [REF_CONO_1, REF_CONO_2, REF_CONO_3]},
     "Some conotoxins appear on national lists of regulated biological toxins; content is limited to risk communication and surveillance awareness."),
    ("paralytic-shellfish-toxins", "Paralytic Shellfish Toxins (Saxitoxins)", "PST",
     ["saxitoxin", "saxitoxins", "paralytic shellfish toxin", "paralytic shellfish poisoning", "stx"],
     ["Carbamate toxins", "Decarbamoyl toxins", "N-sulfocarbamoyl toxins", "Deoxydecarbamoyl toxins", "Benzoate PSTs", "M-toxins"],
     {"source_organisms": ["Dinoflagellates of the genera Alexandrium, Gymnodinium and Pyrodinium", "Some freshwater cyanobacteria"],
      "host_molecular_targets": ["Voltage-gated sodium channels (neurotoxin receptor site 1)"],
      "exposure_syndromes": ["Paralytic shellfish poisoning (PSP)"],
      "countermeasures": [VENT, SUPPORTIVE, DECON], "refs": [REF_TOX_1, REF_TOX_3]},
     "Saxitoxin is a Schedule 1 chemical under the Chemical Weapons Convention; public-health messaging focuses on shellfish harvesting closures and monitoring."),
    ("tetrodotoxin", "Tetrodotoxin", "TTX", ["tetrodotoxin", "tetrodotoxins", "pufferfish poisoning", "fugu poisoning"],
     ["Tetrodotoxin (TTX)", "Tetrodotoxin (canonical)", "Anhydro/epimeric analogues", "Deoxy analogues", "Oxidized/other analogues"],
     {"source_organisms": ["Symbiotic bacteria associated with pufferfish and other marine animals"],
      "host_molecular_targets": ["Voltage-gated sodium channels (neurotoxin receptor site 1)"],
      "exposure_syndromes": ["Tetrodotoxin poisoning"],
      "countermeasures": [VENT, SUPPORTIVE, DECON], "refs": [REF_TOX_1, REF_TOX_2]},
     "Tetrodotoxin appears on national lists of regulated biological toxins; content is limited to risk communication."),
    ("brevetoxins", "Brevetoxins", "NSP", ["brevetoxin", "brevetoxins", "neurotoxic shellfish poisoning"],
     ["Brevetoxins (PbTx-1 to -10)", "Brevetoxin-B backbone analogs (PbTx-2 group)", "Brevetoxin-A backbone analogs (PbTx-1 group)",
      "Conjugates & metabolites in shellfish/mammals", "Brevenal & site-5 antagonists (endogenous inhibitors)"],
     {"source_organisms": ["Dinoflagellate Karenia brevis"],
      "host_molecular_targets": ["Voltage-gated sodium channels (neurotoxin receptor site 5)"],
      "exposure_syndromes": ["Neurotoxic shellfish poisoning (NSP)", "Respiratory irritation from aerosolized bloom toxins"],
      "countermeasures": [SUPPORTIVE], "refs": [REF_TOX_1, REF_TOX_3]}, None),
    ("ciguatoxins", "Ciguatoxins", "CFP", ["ciguatoxin", "ciguatoxins", "ciguatera", "ciguatera fish poisoning"],
     ["Pacific ciguatoxins", "Caribbean ciguatoxins", "Indian Ocean ciguatoxins", "Algal precursors & fish metabolites"],
     {"source_organisms": ["Benthic dinoflagellates of the genera Gambierdiscus and Fukuyoa"],
      "host_molecular_targets": ["Voltage-gated sodium channels (neurotoxin receptor site 5)"],
      "exposure_syndromes": ["Ciguatera fish poisoning (CFP)"],
      "countermeasures": [SUPPORTIVE], "refs": [REF_TOX_1, REF_TOX_2]}, None),
    ("domoic-acid", "Domoic Acid", "ASP", ["domoic acid", "amnesic shellfish poisoning"],
     ["Domoic acid", "Domoic acid (canonical)", "Epi- and isodomoic acids", "Seafood vectors & matrices"],
     {"source_organisms": ["Diatoms of the genus Pseudo-nitzschia"],
      "host_molecular_targets": ["Ionotropic glutamate receptors (kainate and AMPA subtypes)"],
      "exposure_syndromes": ["Amnesic shellfish poisoning (ASP)"],
      "countermeasures": [SUPPORTIVE], "refs": [REF_TOX_1, REF_TOX_3]}, None),
    ("okadaic-acid-dinophysistoxins", "DSP Toxins (Okadaic acid and Dinophysistoxins)", "DSP",
     ["okadaic acid", "dinophysistoxin", "dinophysistoxins", "diarrhetic shellfish poisoning", "dsp toxins"],
     ["Okadaic acid & DTXs", "Okadaic acid", "Dinophysistoxin-1", "Dinophysistoxin-2", "Dinophysistoxin-3"],
     {"source_organisms": ["Dinoflagellates of the genera Dinophysis and Prorocentrum"],
      "host_molecular_targets": ["Serine/threonine protein phosphatases PP1 and PP2A"],
      "exposure_syndromes": ["Diarrhetic shellfish poisoning (DSP)"],
      "countermeasures": ["Oral or intravenous rehydration", SUPPORTIVE], "refs": [REF_TOX_1, REF_TOX_3]}, None),
    ("pectenotoxins", "Pectenotoxins", "PTX", ["pectenotoxin", "pectenotoxins"],
     ["Pectenotoxins (PTX)", "Parent algal pectenotoxins (PTX1/2/6/11)",
      "Shellfish metabolites & esters (PTX2sa, 7-epi-PTX2sa, acyl esters)"],
     {"source_organisms": ["Dinoflagellates of the genus Dinophysis"],
      "host_molecular_targets": ["Actin cytoskeleton"],
      "countermeasures": [SUPPORTIVE], "refs": [REF_TOX_2, REF_TOX_3]}, None),
    ("azaspiracids", "Azaspiracids", "AZA", ["azaspiracid", "azaspiracids", "azaspiracid poisoning"],
     ["Azaspiracids (AZA)", "Parent algal azaspiracids (AZA-1/2/3)", "Additional algal analogues (AZA-38/-39, AZA-59)"],
     {"source_organisms": ["Dinoflagellates of the genus Azadinium"],
      "exposure_syndromes": ["Azaspiracid shellfish poisoning (AZP)"],
      "countermeasures": ["Oral or intravenous rehydration", SUPPORTIVE], "refs": [REF_TOX_2, REF_TOX_3]}, None),
    ("yessotoxins", "Yessotoxins", "YTX", ["yessotoxin", "yessotoxins"],
     ["Yessotoxins (YTX)", "Parent algal yessotoxins (YTX / homoYTX / 45-OH-YTX)",
      "Shellfish metabolites & analogues (carboxyYTX, norYTXs, 45,46,47-trinorYTX)"],
     {"source_organisms": ["Dinoflagellates Protoceratium reticulatum, Lingulodinium polyedra and Gonyaulax spinifera"],
      "countermeasures": [SUPPORTIVE], "refs": [REF_TOX_2, REF_TOX_3]}, None),
    ("palytoxin", "Palytoxin", "PLTX", ["palytoxin", "palytoxins", "ovatoxin", "ovatoxins"],
     ["Palytoxin (PLTX) & classic analogues", "Ostreopsis analogues (ovatoxins & ostreocins)"],
     {"source_organisms": ["Zoanthid corals of the genus Palythoa", "Benthic dinoflagellates of the genus Ostreopsis"],
      "host_molecular_targets": ["Na+/K+-ATPase"],
      "countermeasures": [SUPPORTIVE], "refs": [REF_TOX_1, REF_TOX_2]}, None),
    ("maitotoxins", "Maitotoxins", "MTX", ["maitotoxin", "maitotoxins"],
     ["Maitotoxin-1 (MTX1)", "Maitotoxin-2/3 and related sulfated polyethers"],
     {"source_organisms": ["Benthic dinoflagellates of the genus Gambierdiscus"],
      "host_molecular_targets": ["Calcium influx pathways in excitable and non-excitable cells"],
      "exposure_syndromes": ["Possible contribution to ciguatera fish poisoning"],
      "countermeasures": [SUPPORTIVE], "refs": [REF_TOX_1, REF_TOX_2]}, None),
    ("cyclic-imines", "Cyclic Imines", "SPX, GYM, PnTX", ["cyclic imine", "cyclic imines", "spirolide", "spirolides", "gymnodimine", "gymnodimines", "pinnatoxin", "pinnatoxins"],
     ["Spirolides", "Gymnodimines", "Pinnatoxins"],
     {"source_organisms": ["Dinoflagellates including Alexandrium ostenfeldii, Karenia selliformis and Vulcanodinium rugosum"],
      "host_molecular_targets": ["Nicotinic acetylcholine receptors"],
      "countermeasures": [SUPPORTIVE], "refs": [REF_TOX_2, REF_TOX_3]}, None),
    ("gambierol", "Gambierol", "GAM", ["gambierol", "gambierols"],
     ["Gambierol"],
     {"source_organisms": ["Benthic dinoflagellates of the genus Gambierdiscus"],
      "host_molecular_targets": ["Voltage-gated potassium channels"],
      "countermeasures": [SUPPORTIVE], "refs": [REF_TOX_2]}, None),
    ("karlotoxins", "Karlotoxins", "KmTX", ["karlotoxin", "karlotoxins"],
     ["Karlotoxins"],
     {"source_organisms": ["Dinoflagellate Karlodinium veneficum"],
      "host_molecular_targets": ["Membrane sterols (pore formation)"],
      "countermeasures": [SUPPORTIVE], "refs": [REF_TOX_2]}, None),
    ("amphidinols", "Amphidinols", "AM", ["amphidinol", "amphidinols"],
     ["Amphidinols"],
     {"source_organisms": ["Dinoflagellates of the genus Amphidinium"],
      "host_molecular_targets": ["Membrane sterols (pore formation)"],
      "countermeasures": [SUPPORTIVE], "refs": [REF_TOX_2]}, None),
]

CONO_TARGETS = {
    "α-conotoxins": "Nicotinic acetylcholine receptors",
    "ω-conotoxins": "Voltage-gated calcium channels",
    "μ-conotoxins": "Voltage-gated sodium channels (pore block)",
    "μO-conotoxins": "Voltage-gated sodium channels (gating inhibition)",
    "κ-conotoxins": "Voltage-gated potassium channels",
    "δ-conotoxins": "Voltage-gated sodium channels (delayed inactivation)",
    "ι-conotoxins": "Voltage-gated sodium channels (activation shift)",
    "Conantokins": "NMDA receptors",
    "χ-conopeptides": "Norepinephrine transporter",
    "ρ-conotoxins": "Alpha1-adrenergic receptors",
}

MAITOTOXIN_SOURCES = [
    "Primarily produced by benthic dinoflagellates of the genus Gambierdiscus (historically G. toxicus; strains of G. australes, G. pacificus and G. polynesiensis have been shown to produce maitotoxins in culture).",
    "Found in algal extracts and occasionally in herbivorous reef fish associated with ciguatera ecosystems.",
]


def treatment(name, virus):
    mech, kind = KNOWN_MECHANISMS.get(name, (PLACEHOLDER, PLACEHOLDER))
    effectiveness = PLACEHOLDER
    if virus["id"] == "niv" and name == "Ribavirin":
        effectiveness = "Open-label comparison during the 1998-1999 Malaysian outbreak reported lower case fatality (32% vs 54%); efficacy uncertain in later summaries."
    return {
        "name": name,
        "mechanism_of_action": mech,
        "treatment_type": kind,
        "dosage": PLACEHOLDER,
        "effectiveness": effectiveness,
        "outcome_figures": [],
        "references": list(virus["refs"]),
    }


def virus_entry(v):
    native = NIV_NATIVE if v["id"] == "niv" else {
        "survival_figures": [], "viremia_figures": [], "references": list(v["refs"])}
    entry = {
        "id": v["id"], "name": v["name"], "abbreviation": v["abbreviation"], "aliases": v["aliases"],
        "native_course": native,
        "categories": {k: [treatment(n, v) for n in v[k]]
                       for k in ("pathogen_targeted", "host_targeted", "combinatorial")},
    }
    if v["id"] == "niv":
        entry["ranking_evidence"] = NIV_EVIDENCE
    return entry


def toxin_class(family_id, name, defaults):
    targets = defaults.get("host_molecular_targets", [])
    if family_id == "conotoxins":
        targets = [CONO_TARGETS[name]]
    sources = defaults.get("source_organisms", [])
    if family_id == "maitotoxins" and name == "Maitotoxin-1 (MTX1)":
        sources = MAITOTOXIN_SOURCES
    return {
        "name": name,
        "source_organisms": sources,
        "host_molecular_targets": targets,
        "analogues": [],
        "toxicity": PLACEHOLDER,
        "exposure_syndromes": defaults.get("exposure_syndromes", []),
        "countermeasures": defaults.get("countermeasures", []),
        "references": defaults["refs"],
    }


def family_entry(spec):
    fid, name, abbrev, aliases, classes, defaults, biothreat = spec
    entry = {"id": fid, "name": name, "abbreviation": abbrev, "aliases": aliases,
             "classes": [toxin_class(fid, c, defaults) for c in classes]}
    if biothreat:
        entry["biothreat_concerns"] = biothreat
    if fid == "conotoxins":
        entry["ranking_evidence"] = CONO_EVIDENCE
    return entry


def catalog(domain, groups):
    entries = []
    for category, items in groups:
        for item in items:
            name, url = item if isinstance(item, tuple) else (item, None)
            e = {"name": name, "category": category}
            if url:
                e["url"] = url
            entries.append(e)
    return {"domain": domain, "entries": entries}


VIRAL_CATALOG = [
    ("Chemistry / Bioactivity / Drug-Target", [
        ("PubChem (NCBI/NIH)", "https://pubchem.ncbi.nlm.nih.gov/"),
        ("ChEMBL (EMBL-EBI)", "https://www.ebi.ac.uk/chembl/"),
        ("DrugBank", "https://go.drugbank.com/"),
        "Open Targets Platform", "Drug Repurposing Hub (Broad Institute)", "BindingDB",
        ("IUPHAR / Guide to Pharmacology", "https://www.guidetopharmacology.org/"),
        ("Protein Data Bank (PDB)", "https://www.rcsb.org/")]),
    ("Immunology / Epitopes / Antibodies", [
        ("Immune Epitope Database (IEDB)", "https://www.iedb.org/"),
        "SAbDab (Structural Antibody Database)", "Thera-SAbDab (Therapeutic Structural Antibody Database)"]),
    ("Pathogen / Genomics / Evolution", [
        "BV-BRC (Bacterial and Viral Bioinformatics Resource Center)",
        "NIAID Bioinformatics Resource Centers (BRCs) program directory", "GISAID",
        ("Nextstrain", "https://nextstrain.org/")]),
    ("Clinical Trial Registries", [
        ("ClinicalTrials.gov", "https://clinicaltrials.gov/"),
        ("WHO ICTRP (International Clinical Trials Registry Platform)",
         "https://www.who.int/tools/clinical-trials-registry-platform/the-ictrp-search-portal"),
        ("EU Clinical Trials Register", "https://www.clinicaltrialsregister.eu/"),
        ("ISRCTN", "https://www.isrctn.com/"),
        "ANZCTR (Australian New Zealand Clinical Trials Registry)", "ChiCTR (Chinese Clinical Trial Registry)",
        "CTRI (Clinical Trials Registry – India)", "Pan African Clinical Trials Registry (PACTR)"]),
    ("Regulatory Product Databases", [
        ("Drugs@FDA", "https://www.fda.gov/drugs/development-approval-process-drugs/drug-approvals-and-databases"),
        ("EMA EPAR (European Public Assessment Reports)", "https://www.ema.europa.eu/en/medicines"),
        ("Health Canada Drug Product Database (DPD)",
         "https://www.canada.ca/en/health-canada/services/drugs-health-products/drug-products/drug-product-database.html"),
        ("MHRA products information (UK)", "https://products.mhra.gov.uk/"),
        "TGA ARTG (Australia)", "PMDA approvals information (Japan)"]),
    ("Pathogen-Specific", ["Stanford HIV Drug Resistance Database (HIVDB)"]),
]

TOXIN_CATALOG = [
    ("Global / Core HAB & Phycotoxin Portals", [
        ("HAIS (Harmful Algal Information System) – IOC-UNESCO", "https://data.hais.ioc-unesco.org/"),
        ("HAEDAT (Harmful Algal Event Database) – IOC-UNESCO + ICES + PICES", "https://haedat.iode.org/"),
        ("Taxonomic Reference List of Harmful Microalgae – IOC-UNESCO / WoRMS", "https://marinespecies.org/hab/"),
        "OBIS HAB datasets – OBIS", "ICES-IOC WGHABD – ICES area",
        "EURL for Monitoring of Marine Biotoxins – EU reference network"]),
    ("National / Regional HAB Monitoring", [
        "NOAA NCCOS HAB Portal & Monitoring System – USA",
        "FWC / FWRI HAB Monitoring Database (Karenia brevis) – Florida, USA",
        "California HABMAP (marine) + CDPH Marine Biotoxin Program – California, USA",
        "Alaska HAB Network (AHAB) Data Portal – Alaska, USA",
        "SoundToxins – Washington, USA (Puget Sound)",
        "IFOP / Chile “Marea Roja” (Red Tide) Program – Chile",
        "Canada (DFO/CFIA contributions to HAEDAT) – Canada",
        "Australia National Compilations (IMOS / state programs)",
        "US EPA HAB Data (coasts & inland) – USA"]),
    ("Toxicology / Chemistry / Mechanism Databases", [
        "EFSA OpenFoodTox – EU", "T3DB (Toxin & Toxin-Target Database)",
        "CompTox Chemicals Dashboard (US EPA)", "CTD (Comparative Toxicogenomics Database)",
        ("PubChem (NCBI/NIH)", "https://pubchem.ncbi.nlm.nih.gov/"),
        "CyanoMetDB (cyanobacterial metabolites / cyanotoxins)"]),
    ("Protein / Peptide Toxins", [
        ("UniProt Tox-Prot", "https://www.uniprot.org/"),
        ("ConoServer", "https://www.conoserver.org/")]),
    ("Case / Exposure Surveillance", [
        "Ciguatera Map & Reporting System (Ciguawatch)", "Water Quality Portal (WQP)",
        "WQX (Water Quality Exchange)"]),
]


def write(path, doc):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8")


def main():
    kb = {
        "schema_version": "1.0.0",
        "generated_at": "2025-11-01T00:00:00Z",
        "viruses": [virus_entry(v) for v in VIRUSES],
        "toxin_families": [family_entry(f) for f in FAMILIES],
    }
    write(ROOT / "data/fixture/kb.json", kb)
    write(ROOT / "data/catalogs/viral_trx.json", catalog("viral_trx", VIRAL_CATALOG))
    write(ROOT / "data/catalogs/marine_toxin.json", catalog("marine_toxin", TOXIN_CATALOG))


if __name__ == "__main__":
    main()
