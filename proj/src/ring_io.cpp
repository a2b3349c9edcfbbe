#include "torsig/ring_io.hpp"

#include <fstream>

namespace torsig {

namespace {

nlohmann::ordered_json integer_json(const BigInt& x) {
  if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
    return x.str();
  return x.convert_to<std::int64_t>();
}

BigInt integer_from_json(const nlohmann::json& v, const char* field) {
  if (v.is_number_integer()) return BigInt(v.get<std::int64_t>());
  if (v.is_string()) {
    Rational r = parse_rational(v.get<std::string>());
    if (!is_integer(r)) throw InputError(std::string(field) + ": expected an integer, got \"" +
                                         v.get<std::string>() + "\"");
    return boost::multiprecision::numerator(r);
  }
  throw InputError(std::string(field) + ": expected an integer");
}

Rational rational_from_json(const nlohmann::json& v) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (v.is_string()) return parse_rational(v.get<std::string>());
  throw InputError("facets: entries must be \"a/b\" strings or integers");
}

const nlohmann::json& field(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw InputError(std::string("ring file: missing field '") + key + "'");
  return doc.at(key);
}

}  // namespace

nlohmann::ordered_json ring_to_json(const RingSpec& spec) {
  nlohmann::ordered_json doc;
  doc["name"] = spec.name;
  doc["dim"] = spec.dim();
  auto basis = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < spec.lattice.basis.rows(); ++r) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index c = 0; c < spec.lattice.basis.cols(); ++c)
      row.push_back(integer_json(spec.lattice.basis(r, c)));
    basis.push_back(std::move(row));
  }
  doc["lattice_basis"] = std::move(basis);
  auto facets = nlohmann::ordered_json::array();
  for (const auto& f : spec.facets) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index c = 0; c < f.covector.size(); ++c) row.push_back(to_string(f.covector(c)));
    facets.push_back(std::move(row));
  }
  doc["facets"] = std::move(facets);
  return doc;
}

RingSpec ring_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("ring file: top level must be an object");
  RingSpec spec;
  const auto& name = field(doc, "name");
  if (!name.is_string()) throw InputError("ring file: 'name' must be a string");
  spec.name = name.get<std::string>();

  const auto& dim_field = field(doc, "dim");
  if (!dim_field.is_number_integer() || dim_field.get<std::int64_t>() < 1)
    throw InputError("ring file: 'dim' must be a positive integer");
  const auto d = static_cast<Eigen::Index>(dim_field.get<std::int64_t>());

  const auto& basis = field(doc, "lattice_basis");
  if (!basis.is_array() || static_cast<Eigen::Index>(basis.size()) != d)
    throw InputError("ring file: 'lattice_basis' must list dim rows");
  spec.lattice.basis.resize(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const auto& row = basis[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d)
      throw InputError("ring file: every lattice_basis row must have dim entries");
    for (Eigen::Index c = 0; c < d; ++c)
      spec.lattice.basis(r, c) = integer_from_json(row[static_cast<std::size_t>(c)], "lattice_basis");
  }

  const auto& facets = field(doc, "facets");
  if (!facets.is_array()) throw InputError("ring file: 'facets' must be an array");
  for (const auto& row : facets) {
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d)
      throw InputError("ring file: every facet must have dim entries");
    RatVec cov(d);
    for (Eigen::Index c = 0; c < d; ++c) cov(c) = rational_from_json(row[static_cast<std::size_t>(c)]);
    spec.facets.push_back({std::move(cov)});
  }
  return spec;
}

RingSpec load_ring_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open ring file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("ring file " + path.string() + ": " + e.what());
  }
  return ring_from_json(doc);
}

}  // namespace torsig
