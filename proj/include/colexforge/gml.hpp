#pragma once

#include "colexforge/network.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace colexforge {

/// GML 1.0 text. Nodes get dense integer ids in concept order; labels are
/// concept ids. Edge attributes: weight (family count), families, varieties,
/// words, plus the ';'-joined family_ids and variety_ids.
std::string gml_text(const ColexNetwork& network);
void write_gml(const ColexNetwork& network, const std::filesystem::path& path);

ColexNetwork parse_gml(std::string_view text);
ColexNetwork read_gml(const std::filesystem::path& path);

}  // namespace colexforge
