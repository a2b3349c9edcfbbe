#pragma once

// Ring-definition documents (JSON):
//
//   {
//     "name": "an:3",
//     "dim": 2,
//     "lattice_basis": [[1, 1], [0, 3]],
//     "facets": [["1", "0"], ["0", "1"]]
//   }
//
// Facet entries are rationals written as "a/b" strings; plain integers are
// accepted too. Basis entries are integers (or decimal strings when large).

#include "torsig/toric_model.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace torsig {

nlohmann::ordered_json ring_to_json(const RingSpec& spec);

/// Throws InputError on a malformed document. Does not validate the cone.
RingSpec ring_from_json(const nlohmann::json& doc);

RingSpec load_ring_file(const std::filesystem::path& path);

}  // namespace torsig
