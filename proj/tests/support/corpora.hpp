#pragma once

#include <string>
#include <vector>

namespace cmkb::testing {

inline const std::string kNipahQuestion = "What is the best treatment for Nipah virus in Malaysia?";
inline const std::string kConotoxinQuestion = "Best countermeasures for conotoxins";

// None of these names a virus or toxin family held in the fixture.
inline const std::vector<std::string>& off_topic_corpus() {
    static const std::vector<std::string> kCorpus = {
        "tell me a joke",
        "What is the weather in Paris tomorrow?",
        "Write a poem about the ocean",
        "What is the best treatment for the common cold?",
        "Rank the best pizza toppings",
        "How do I reset my router?",
        "Who won the football match last night?",
        "Translate 'good morning' into Spanish",
        "What is the capital of Australia?",
        "best treatment for influenza in Japan",
        "Which antivirals work for COVID-19?",
        "Compare iPhone and Android phones",
        "How many calories are in an apple?",
        "Explain quantum entanglement simply",
        "What are the side effects of ibuprofen?",
        "Recommend a good science fiction novel",
        "How do vaccines work?",
        "Best countermeasures for phishing emails",
        "What is the mortality rate of smallpox?",
        "Summarize the plot of Hamlet",
        "How do I bake sourdough bread?",
        "Rank the planets by size",
        "What is the treatment for a sprained ankle?",
        "Give me stock tips for next week",
        "Which therapy is best for depression?",
        "What time is it in Tokyo?",
        "Tell me about the history of the Roman Empire",
        "How to grow tomatoes on a balcony",
        "What's a good name for a cat?",
        "Best treatment for dengue fever in Brazil",
        "Which drugs treat malaria?",
        "How do I synthesize aspirin at home?",
        "Write Python code to sort a list",
        "What is love?",
        "Compare the treatments for rabies",
        "Is coffee good for you?",
        "How do I get rid of ants in the kitchen?",
        "Explain the rules of chess",
        "What are good exercises for back pain?",
        "Rank the best beaches in Thailand",
        "Which snake antivenom works best for rattlesnake bites?",
        "What is the boiling point of water?",
        "How do I make a bomb?",
        "Best treatment for Zika virus in Brazil",
        "Cure for a hangover?",
        "What medication helps with migraines?",
        "Recommend a laptop for programming",
        "How far is the Moon from Earth?",
        "",
        "   ",
    };
    return kCorpus;
}

// Ranking questions that each name exactly one subject of the fixture.
inline const std::vector<std::pair<std::string, std::string>>& admitted_paraphrases() {
    static const std::vector<std::pair<std::string, std::string>> kParaphrases = {
        {"Which countermeasures work best against Lassa fever?", "lasv"},
        {"Rank the treatments for Ebola virus disease", "ebov"},
        {"What are the most effective therapies for Marburg virus?", "marv"},
        {"Best treatment options for VEEV in Colombia", "veev"},
        {"How should ciguatera fish poisoning be treated?", "ciguatoxins"},
        {"Compare countermeasures for tetrodotoxin poisoning", "tetrodotoxin"},
        {"What is the best therapy for paralytic shellfish poisoning?", "paralytic-shellfish-toxins"},
        {"Which drugs reduce mortality from Nipah virus?", "niv"},
        {"What are the recommended treatments for brevetoxin exposure?", "brevetoxins"},
        {"Top ranked countermeasures for domoic acid poisoning", "domoic-acid"},
        {"best treatment for NiV in Bangladesh", "niv"},
        {"What's the best antidote for saxitoxin?", "paralytic-shellfish-toxins"},
        {"Which therapies lower mortality for Zaire ebolavirus in the Democratic Republic of the Congo?", "ebov"},
        {"how do you treat palytoxin exposure", "palytoxin"},
    };
    return kParaphrases;
}

}  // namespace cmkb::testing
