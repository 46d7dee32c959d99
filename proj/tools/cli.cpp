#include "cli.hpp"

#include "twothree/twothree.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace twothree::cli {
namespace {

using Json = json::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  std::istream& in;
  std::ostream& out;
  bool quiet = false;

  void note(const std::string& line) const {
    if (!quiet) out << "# " << line << "\n";
  }
  void emit(const Json& j) const { out << j.dump(2) << "\n"; }
};

std::string read_source(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
  } else {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read " + path);
    buf << f.rdbuf();
  }
  return buf.str();
}

// Reads the first JSON document. Preamble lines starting with '#' and any
// text after the document (the classification line of `closure`, say) are
// ignored, so one verb's output can be piped straight into another.
Json read_json(const std::string& path, std::istream& in) {
  std::istringstream text(read_source(path, in));
  std::string body, line;
  while (std::getline(text, line))
    if (line.empty() || line[0] != '#') body += line + "\n";
  std::istringstream doc(body);
  Json j;
  doc >> j;
  return j;
}

FGModule read_module(const std::string& arg, std::istream& in) {
  if (!arg.empty() && arg[0] == '@') {
    std::string text = read_source(arg.substr(1), in);
    const auto first = text.find_first_not_of(" \t\r\n");
    const auto last = text.find_last_not_of(" \t\r\n");
    return parse_module(first == std::string::npos ? "" : text.substr(first, last - first + 1));
  }
  return parse_module(arg);
}

std::vector<FGModule> read_modules(const std::vector<std::string>& args, std::istream& in) {
  std::vector<FGModule> out;
  for (const auto& a : args) out.push_back(read_module(a, in));
  return out;
}

std::vector<Prime> read_primes(const std::vector<std::string>& args) {
  std::vector<Prime> out;
  for (const auto& a : args) {
    Prime p = parse_prime(a);
    if (p.is_generic()) throw UsageError("prime lists take positive primes");
    out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string join(const std::vector<FGModule>& ms) {
  std::string s;
  for (const auto& m : ms) s += (s.empty() ? "" : ", ") + to_string(m);
  return s;
}

int cmd_chi(const Context& c, const std::string& expr, const std::optional<std::string>& prime) {
  const FGModule x = read_module(expr, c.in);
  c.note("module " + to_string(x));
  std::vector<Prime> primes;
  if (prime) {
    primes.push_back(parse_prime(*prime));
  } else {
    primes.push_back(Prime::generic());
    for (const auto& [p, part] : x.torsion()) primes.push_back(p);
  }
  for (Prime p : primes) c.out << "chi_" << p.str() << " = " << chi(x, p) << "\n";
  return kOk;
}

int cmd_snf(const Context& c, const std::string& file) {
  const IntMatrix a = json::matrix_from_json(read_json(file, c.in));
  c.note("smith form of a " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " matrix");
  c.emit(json::to_json(smith_normal_form(a)));
  return kOk;
}

int cmd_closure(const Context& c, const std::vector<std::string>& exprs) {
  const auto gens = read_modules(exprs, c.in);
  c.note("closure of {" + join(gens) + "}");
  const SubcatDescriptor d = closure(gens);
  c.emit(json::to_json(d));
  c.out << classify(d) << "\n";
  return kOk;
}

int cmd_member(const Context& c, const std::string& desc, const std::string& expr) {
  const SubcatDescriptor d = json::descriptor_from_json(read_json(desc, c.in));
  const FGModule x = read_module(expr, c.in);
  c.note(to_string(x) + " in " + classify(d));
  const bool in = member(d, x);
  c.out << (in ? "true" : "false") << "\n";
  return in ? kOk : kFalse;
}

int cmd_witness(const Context& c, const std::vector<std::string>& gen_exprs, const std::string& target_expr,
                const std::optional<std::string>& out_file) {
  const auto gens = read_modules(gen_exprs, c.in);
  const FGModule target = read_module(target_expr, c.in);
  const Derivation d = derive_witness(gens, target);
  const Json j = json::to_json(d);
  if (out_file) {
    std::ofstream f(*out_file);
    if (!f) throw UsageError("cannot write " + *out_file);
    f << j.dump(2) << "\n";
    c.note(std::to_string(d.steps.size()) + " steps written to " + *out_file);
  } else {
    c.note("derivation of " + to_string(target) + " from {" + join(gens) + "}, " +
           std::to_string(d.steps.size()) + " steps");
    c.emit(j);
  }
  return kOk;
}

int cmd_verify(const Context& c, const std::string& file) {
  const Json j = read_json(file, c.in);
  if (j.is_object() && j.contains("steps")) {
    const Derivation d = json::derivation_from_json(j);
    c.note("derivation of " + to_string(d.target) + ", " + std::to_string(d.steps.size()) + " steps");
    const DerivationVerdict v = verify_derivation(d);
    if (v.verified) {
      c.out << "Verified\n";
      return kOk;
    }
    c.out << "Rejected at step " << v.failed_step << ": " << v.reason << "\n";
    return kFalse;
  }
  const SES s = json::ses_from_json(j);
  c.note("short exact sequence candidate");
  try {
    const SESVerdict v = verify_ses(s);
    if (v.verified()) {
      c.out << "Verified\n";
      return kOk;
    }
    c.out << "Rejected: " << to_string(v.failure) << (v.detail.empty() ? "" : ": " + v.detail) << "\n";
  } catch (const IllDefinedMorphism& e) {
    c.out << "Rejected: " << e.what() << "\n";
  }
  return kFalse;
}

UniverseBounds make_bounds(const std::vector<std::string>& primes, std::uint64_t rank, unsigned length,
                           std::uint64_t max_order) {
  return {read_primes(primes), rank, length, max_order};
}

int cmd_enumerate(const Context& c, const UniverseBounds& b) {
  const auto all = enumerate_modules(b);
  c.note(std::to_string(all.size()) + " modules");
  for (const auto& m : all) c.out << to_string(m) << "\n";
  return kOk;
}

int cmd_sandwich(const Context& c, const std::vector<std::string>& gen_exprs, const UniverseBounds& b) {
  const auto gens = read_modules(gen_exprs, c.in);
  c.note("sandwich for {" + join(gens) + "}");
  const SandwichReport r = sandwich_check(gens, b);
  c.emit(json::to_json(r));
  return r.pass() ? kOk : kFalse;
}

Lattice read_lattice(const std::vector<Prime>& support, const std::vector<std::string>& rows) {
  std::vector<std::vector<Integer>> vs;
  for (const auto& row : rows) {
    std::vector<Integer> v;
    std::stringstream ss(row);
    for (std::string item; std::getline(ss, item, ',');) v.push_back(parse_integer(item));
    if (v.size() != support.size())
      throw UsageError("basis row \"" + row + "\" needs " + std::to_string(support.size()) + " entries");
    vs.push_back(std::move(v));
  }
  return Lattice::from_generators(support, vs);
}

int cmd_k0_to(const Context& c, const std::vector<std::string>& support_args, const std::vector<std::string>& rows) {
  const auto s = read_primes(support_args);
  const SubcatDescriptor d = subgroup_to_subcat(s, read_lattice(s, rows));
  c.note("subcategory of W_S for the given subgroup");
  c.emit(json::to_json(d));
  c.out << classify(d) << "\n";
  return kOk;
}

int cmd_k0_from(const Context& c, const std::string& desc, const std::vector<std::string>& support_args) {
  const auto s = read_primes(support_args);
  const SubcatDescriptor d = json::descriptor_from_json(read_json(desc, c.in));
  const Lattice h = subcat_to_subgroup(d, s);
  c.note("subgroup of K0(W_S) for " + classify(d));
  c.emit({{"support", json::support_to_json(s)}, {"basis", json::basis_to_json(h)}});
  return kOk;
}

int cmd_k0_failure(const Context& c) {
  const auto [a, b] = k0_failure_witness();
  c.note("distinct subcategories with the same image in K0 of all modules");
  c.emit({{"first", json::to_json(a)},
          {"second", json::to_json(b)},
          {"rank_class", {rank_class_generator(a).str(), rank_class_generator(b).str()}},
          {"equal", descriptor_equal(a, b)}});
  c.out << classify(a) << " != " << classify(b) << "\n";
  return kOk;
}

int cmd_not_wide(const Context& c, std::uint64_t k) {
  const NotWideDemo d = demonstrate_not_wide(k);
  const SubcatDescriptor ik = IMod{k};
  c.note("Z^" + std::to_string(k) + " -> Z^" + std::to_string(k) + " keeping one coordinate");
  c.emit({{"k", std::to_string(k)},
          {"source", json::to_json(d.morphism.source)},
          {"target", json::to_json(d.morphism.target)},
          {"matrix", json::to_json(d.morphism.matrix)},
          {"kernel", json::to_json(d.kernel)},
          {"source_in_I_k", member(ik, d.source)},
          {"target_in_I_k", member(ik, d.target)},
          {"kernel_in_I_k", member(ik, d.kernel)}});
  c.out << "kernel " << to_string(d.kernel) << " is not in " << classify(ik) << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-out-of-three subcategories of finitely generated abelian groups", "twothree"};
  app.require_subcommand(1);
  app.fallthrough();
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress the '# ' preamble lines");

  std::string expr, file, desc, target;
  std::optional<std::string> prime, out_file;
  std::vector<std::string> exprs, gens, primes, support, basis;
  std::uint64_t rank = 0, max_order = 144, k = 0;
  unsigned length = 0;

  auto* chi_cmd = app.add_subcommand("chi", "Euler characteristics chi_p");
  chi_cmd->add_option("expr", expr, "Module expression or @FILE")->required();
  chi_cmd->add_option("-p,--prime", prime, "Single prime (0 for the rank)");

  auto* snf_cmd = app.add_subcommand("snf", "Smith normal form of an IntMatrix JSON file");
  snf_cmd->add_option("file", file, "Matrix JSON, or - for stdin")->required();

  auto* closure_cmd = app.add_subcommand("closure", "Descriptor of the generated 2-3 subcategory");
  closure_cmd->add_option("exprs", exprs, "Generator expressions")->required();

  auto* member_cmd = app.add_subcommand("member", "Membership test; exit 0 when a member");
  member_cmd->add_option("--desc", desc, "Descriptor JSON file")->required();
  member_cmd->add_option("expr", expr, "Module expression or @FILE")->required();

  auto* witness_cmd = app.add_subcommand("witness", "Explicit derivation of a target from generators");
  witness_cmd->add_option("--gen", gens, "Generator expressions")->required();
  witness_cmd->add_option("--target", target, "Target expression")->required();
  witness_cmd->add_option("-o,--output", out_file, "Write the derivation here");

  auto* verify_cmd = app.add_subcommand("verify", "Check a derivation or a single SES");
  verify_cmd->add_option("file", file, "JSON file, or - for stdin")->required();

  auto add_bounds = [&](CLI::App* s) {
    s->add_option("--primes", primes, "Comma-separated primes")->delimiter(',')->required();
    s->add_option("--rank", rank, "Maximum rank")->required();
    s->add_option("--length", length, "Maximum length per prime")->required();
    s->add_option("--max-order", max_order, "Cap on the order of finite middles")->capture_default_str();
  };
  auto* enumerate_cmd = app.add_subcommand("enumerate", "List the bounded universe");
  add_bounds(enumerate_cmd);

  auto* sandwich_cmd = app.add_subcommand("sandwich", "Compare the descriptor with the rule fixpoint");
  sandwich_cmd->add_option("--gen", gens, "Generator expressions")->required();
  add_bounds(sandwich_cmd);

  auto* k0_cmd = app.add_subcommand("k0", "Subgroups of K0(W_S) and subcategories");
  k0_cmd->require_subcommand(1);
  auto* k0_to = k0_cmd->add_subcommand("to-subcat", "Subgroup H of Z^S to F(S, H)");
  k0_to->add_option("--support", support, "Comma-separated primes S")->delimiter(',')->required();
  k0_to->add_option("--basis", basis, "Generator rows, each comma-separated");
  auto* k0_from = k0_cmd->add_subcommand("from-subcat", "Descriptor to its subgroup of Z^S");
  k0_from->add_option("--desc", desc, "Descriptor JSON file")->required();
  k0_from->add_option("--support", support, "Comma-separated primes S")->delimiter(',')->required();
  auto* k0_fail = k0_cmd->add_subcommand("failure-demo", "K0 of all modules does not classify");

  auto* wide_cmd = app.add_subcommand("demo-not-wide", "I_k is not closed under kernels");
  wide_cmd->add_option("k", k, "k >= 2")->required();

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  const Context c{in, out, quiet};
  try {
    if (chi_cmd->parsed()) return cmd_chi(c, expr, prime);
    if (snf_cmd->parsed()) return cmd_snf(c, file);
    if (closure_cmd->parsed()) return cmd_closure(c, exprs);
    if (member_cmd->parsed()) return cmd_member(c, desc, expr);
    if (witness_cmd->parsed()) return cmd_witness(c, gens, target, out_file);
    if (verify_cmd->parsed()) return cmd_verify(c, file);
    if (enumerate_cmd->parsed()) return cmd_enumerate(c, make_bounds(primes, rank, length, max_order));
    if (sandwich_cmd->parsed()) return cmd_sandwich(c, gens, make_bounds(primes, rank, length, max_order));
    if (k0_to->parsed()) return cmd_k0_to(c, support, basis);
    if (k0_from->parsed()) return cmd_k0_from(c, desc, support);
    if (k0_fail->parsed()) return cmd_k0_failure(c);
    if (wide_cmd->parsed()) return cmd_not_wide(c, k);
  } catch (const NotInClosure& e) {
    err << "error: " << e.what() << "\n";
    return kFalse;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFalse;
  }
  return kUsage;
}

}  // namespace twothree::cli
