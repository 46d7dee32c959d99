#pragma once

// JSON forms of the library's values. Every number is written as a decimal
// string; readers also accept plain JSON integers.

#include "twothree/derivation.hpp"
#include "twothree/fg_module.hpp"
#include "twothree/int_matrix.hpp"
#include "twothree/lattice.hpp"
#include "twothree/normal_form.hpp"
#include "twothree/oracle.hpp"
#include "twothree/ses.hpp"
#include "twothree/subcat.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace twothree::json {

using json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw FormatError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline Integer read_integer(const json& j) {
  if (j.is_string()) return parse_integer(j.get<std::string>());
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return Integer(j.get<std::uint64_t>());
  throw FormatError("expected an integer (number or decimal string), got " + j.dump());
}

inline std::uint64_t read_count(const json& j) {
  Integer v = read_integer(j);
  if (v < 0) throw FormatError("expected a nonnegative count, got " + v.str());
  return to_u64(v);
}

inline json num(std::uint64_t n) { return std::to_string(n); }

}  // namespace detail

// ---- IntMatrix -------------------------------------------------------------

inline json to_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    rows.push_back(std::move(row));
  }
  return {{"rows", detail::num(m.rows())}, {"cols", detail::num(m.cols())}, {"entries", std::move(rows)}};
}

inline IntMatrix matrix_from_json(const json& j) {
  const std::size_t rows = detail::read_count(detail::field(j, "rows"));
  const std::size_t cols = detail::read_count(detail::field(j, "cols"));
  const json& entries = detail::field(j, "entries");
  if (!entries.is_array() || entries.size() != rows)
    throw FormatError("matrix entries must be an array of " + std::to_string(rows) + " rows");
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = entries[i];
    if (!row.is_array() || row.size() != cols)
      throw FormatError("matrix row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = detail::read_integer(row[k]);
  }
  return m;
}

inline json to_json(const SNFResult& s) {
  return {{"U", to_json(s.U)}, {"D", to_json(s.D)}, {"V", to_json(s.V)}};
}

inline SNFResult snf_from_json(const json& j) {
  return {matrix_from_json(detail::field(j, "U")), matrix_from_json(detail::field(j, "D")),
          matrix_from_json(detail::field(j, "V"))};
}

// ---- FGModule --------------------------------------------------------------

inline json to_json(const FGModule& m) {
  json torsion = json::object();
  for (const auto& [p, part] : m.torsion()) {
    json parts = json::array();
    for (unsigned r : part.parts()) parts.push_back(detail::num(r));
    torsion[p.str()] = std::move(parts);
  }
  return {{"rank", detail::num(m.rank())}, {"torsion", std::move(torsion)}};
}

inline FGModule module_from_json(const json& j) {
  std::map<Prime, Partition> t;
  if (j.contains("torsion")) {
    const json& tj = j.at("torsion");
    if (!tj.is_object()) throw FormatError("torsion must be an object keyed by prime");
    for (const auto& [key, parts] : tj.items()) {
      if (!parts.is_array()) throw FormatError("partition must be an array");
      std::vector<unsigned> v;
      for (const auto& r : parts) v.push_back(static_cast<unsigned>(detail::read_count(r)));
      std::vector<unsigned> sorted = v;
      std::sort(sorted.begin(), sorted.end(), std::greater<>());
      if (sorted != v) throw FormatError("partition for prime " + key + " must be descending");
      Prime p;
      try {
        p = parse_prime(key);
      } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
      }
      if (p.is_generic()) throw FormatError("torsion key must be a nonzero prime");
      if (v.empty()) throw FormatError("empty partition for prime " + key);
      t.emplace(p, Partition(v));
    }
  }
  return {detail::read_count(detail::field(j, "rank")), std::move(t)};
}

// ---- Lattice and descriptors -------------------------------------------------

inline json support_to_json(const std::vector<Prime>& s) {
  json out = json::array();
  for (Prime p : s) out.push_back(p.str());
  return out;
}

inline std::vector<Prime> support_from_json(const json& j) {
  if (!j.is_array()) throw FormatError("support must be an array of primes");
  std::vector<Prime> s;
  for (const auto& x : j) {
    try {
      s.push_back(Prime::of(to_u64(detail::read_integer(x))));
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
  }
  return s;
}

inline json basis_to_json(const Lattice& h) {
  json rows = json::array();
  for (std::size_t i = 0; i < h.canonical().rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < h.canonical().cols(); ++k) row.push_back(h.canonical()(i, k).str());
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Lattice lattice_from_json(std::vector<Prime> support, const json& basis) {
  if (!basis.is_array()) throw FormatError("basis must be an array of rows");
  std::vector<std::vector<Integer>> vecs;
  for (const auto& row : basis) {
    if (!row.is_array() || row.size() != support.size())
      throw FormatError("basis rows must have one entry per support prime");
    std::vector<Integer> v;
    for (const auto& x : row) v.push_back(detail::read_integer(x));
    vecs.push_back(std::move(v));
  }
  try {
    return Lattice::from_generators(std::move(support), vecs);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

inline json to_json(const SubcatDescriptor& d) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, EmptySubcat>) {
          return {{"kind", "empty"}};
        } else if constexpr (std::is_same_v<T, IMod>) {
          return {{"kind", "imod"}, {"k", detail::num(v.k)}};
        } else {
          return {{"kind", "torsionF"},
                  {"support", support_to_json(v.support())},
                  {"basis", basis_to_json(v.lattice)},
                  {"outside", v.outside == Outside::Free ? "free" : "forbidden"}};
        }
      },
      d);
}

inline SubcatDescriptor descriptor_from_json(const json& j) {
  const std::string kind = detail::field(j, "kind").get<std::string>();
  if (kind == "empty") return EmptySubcat{};
  if (kind == "imod") {
    std::uint64_t k = detail::read_count(detail::field(j, "k"));
    if (k == 0) throw FormatError("imod requires k >= 1");
    return IMod{k};
  }
  if (kind == "torsionF") {
    std::vector<Prime> support = support_from_json(detail::field(j, "support"));
    Lattice h = lattice_from_json(std::move(support), detail::field(j, "basis"));
    const std::string outside = j.value("outside", std::string("forbidden"));
    if (outside != "forbidden" && outside != "free")
      throw FormatError("outside must be \"forbidden\" or \"free\"");
    return TorsionF{std::move(h), outside == "free" ? Outside::Free : Outside::Forbidden};
  }
  throw FormatError("unknown descriptor kind \"" + kind + "\"");
}

// ---- Presentations, sequences, derivations ------------------------------------

inline json to_json(const Presentation& p) {
  return {{"generators", detail::num(p.generators)}, {"relations", to_json(p.relations)}};
}

inline Presentation presentation_from_json(const json& j) {
  const std::size_t n = detail::read_count(detail::field(j, "generators"));
  IntMatrix rel = matrix_from_json(detail::field(j, "relations"));
  if (rel.rows() != n) throw FormatError("relation rows must equal generator count");
  return {n, std::move(rel)};
}

inline json to_json(const SES& s) {
  return {{"A", to_json(s.a)}, {"B", to_json(s.b)}, {"C", to_json(s.c)},
          {"f", to_json(s.f)}, {"g", to_json(s.g)}};
}

inline SES ses_from_json(const json& j) {
  return {presentation_from_json(detail::field(j, "A")), presentation_from_json(detail::field(j, "B")),
          presentation_from_json(detail::field(j, "C")), matrix_from_json(detail::field(j, "f")),
          matrix_from_json(detail::field(j, "g"))};
}

inline Rule rule_from_string(const std::string& s) {
  for (Rule r : {Rule::Axiom, Rule::SumSplit, Rule::SubInfer, Rule::QuotientInfer, Rule::MiddleInfer})
    if (s == to_string(r)) return r;
  throw FormatError("unknown rule \"" + s + "\"");
}

inline Position position_from_string(const std::string& s) {
  for (Position p : {Position::Sub, Position::Middle, Position::Quotient})
    if (s == to_string(p)) return p;
  throw FormatError("unknown position \"" + s + "\"");
}

inline json to_json(const Derivation& d) {
  json gens = json::array();
  for (const auto& g : d.generators) gens.push_back(to_json(g));
  json steps = json::array();
  for (const auto& s : d.steps) {
    json premises = json::array();
    for (const auto& p : s.premises) premises.push_back({{"index", detail::num(p.index)}, {"position", to_string(p.position)}});
    json step = {{"rule", to_string(s.rule)}, {"premises", std::move(premises)},
                 {"conclusion", to_json(s.conclusion)}};
    if (s.ses) step["ses"] = to_json(*s.ses);
    steps.push_back(std::move(step));
  }
  return {{"generators", std::move(gens)}, {"target", to_json(d.target)}, {"steps", std::move(steps)}};
}

inline Derivation derivation_from_json(const json& j) {
  Derivation d;
  for (const auto& g : detail::field(j, "generators")) d.generators.push_back(module_from_json(g));
  d.target = module_from_json(detail::field(j, "target"));
  for (const auto& sj : detail::field(j, "steps")) {
    DerivationStep s;
    s.rule = rule_from_string(detail::field(sj, "rule").get<std::string>());
    for (const auto& pj : sj.value("premises", json::array()))
      s.premises.push_back({static_cast<std::size_t>(detail::read_count(detail::field(pj, "index"))),
                            position_from_string(detail::field(pj, "position").get<std::string>())});
    if (sj.contains("ses")) s.ses = ses_from_json(sj.at("ses"));
    s.conclusion = module_from_json(detail::field(sj, "conclusion"));
    d.steps.push_back(std::move(s));
  }
  return d;
}

// ---- Oracle report -------------------------------------------------------------

inline json to_json(const SandwichReport& r) {
  json witnesses = json::array();
  for (const auto& w : r.witnesses) witnesses.push_back(to_json(w));
  return {{"descriptor", to_json(r.descriptor)},
          {"verdict", r.pass() ? "PASS" : "FAIL"},
          {"universe_size", detail::num(r.universe_size)},
          {"fixpoint_size", detail::num(r.fixpoint.size())},
          {"predicate_size", detail::num(r.predicate.size())},
          {"witnesses", std::move(witnesses)}};
}

}  // namespace twothree::json
