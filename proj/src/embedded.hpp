#pragma once

#include <string_view>

// Generated from data/catalogs and contracts at configure time.
namespace cmkb::embedded {

std::string_view viral_trx_catalog();
std::string_view marine_toxin_catalog();
std::string_view api_contract();
std::string_view provider_contract();

}  // namespace cmkb::embedded
