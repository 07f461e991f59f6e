#include "qjacobi/cli.hpp"

#include "qjacobi/liealg.hpp"
#include "qjacobi/psi.hpp"
#include "qjacobi/transport.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace qjacobi {

namespace {

struct Options {
  int order = 4;
  std::string algebra = "sl2";
  std::string table = "builtin";
  std::string format = "text";
  std::string out;
  std::string suite;
  std::string identity;
  std::string path;
  bool golden = false;
};

EkTable resolve_table(const std::string &name) { return name == "builtin" ? builtin_table() : load_table(name); }

std::string dump(const nlohmann::json &j) { return j.dump(2) + "\n"; }

int emit(const Options &o, const std::string &text, std::ostream &out, std::ostream &err) {
  if (o.out.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) {
    err << "error: cannot write '" << o.out << "'\n";
    return kExitInput;
  }
  f << text;
  return kExitOk;
}

int cmd_psi(const Options &o, std::ostream &out, std::ostream &err) {
  PsiPair pair = compute_psi(resolve_table(o.table), o.order);
  if (o.format == "json")
    return emit(o, dump(psi_to_json(pair)), out, err);
  if (!o.golden)
    for (const auto &n : pair.notices)
      err << "notice: " << n << "\n";
  return emit(o, psi_to_text(pair), out, err);
}

int cmd_eval(const Options &o, std::ostream &out, std::ostream &err) {
  TensorOps ops = build_tensor_ops(build_algebra(o.algebra));
  PsiPair pair = compute_psi(resolve_table(o.table), o.order);
  for (const auto &n : pair.notices)
    err << "notice: " << n << "\n";
  MatrixSeries m = eval_series(pair.psi, ops);
  if (o.format == "json")
    return emit(o, dump({{"algebra", o.algebra}, {"order", o.order}, {"psi", series_to_json(m)}}), out, err);
  return emit(o, matrix_series_to_text(m), out, err);
}

int cmd_omega(const Options &o, std::ostream &out, std::ostream &err) {
  TensorOps ops = build_tensor_ops(build_algebra(o.algebra));
  SpectrumReport s = omega_spectrum(ops);
  if (o.format == "json")
    return emit(o, dump({{"algebra", o.algebra}, {"omega", ops.Omega.to_json()}, {"spectrum", s.to_json()}}), out,
                err);
  std::ostringstream os;
  os << "Omega on V x V (" << ops.Omega.rows() << " x " << ops.Omega.cols() << "):\n"
     << ops.Omega.to_text() << s.to_text();
  return emit(o, os.str(), out, err);
}

int cmd_table_validate(const Options &o, std::ostream &out, std::ostream &err) {
  EkTable t;
  try {
    t = load_table(o.path);
  } catch (const Error &e) {
    if (o.format == "json")
      emit(o, dump({{"path", o.path}, {"ok", false}, {"errors", {e.what()}}}), out, err);
    else
      emit(o, "invalid: " + std::string(e.what()) + "\n", out, err);
    return kExitInput;
  }
  TableDiagnostics d = validate_table(t);
  if (o.format == "json")
    emit(o, dump({{"path", o.path}, {"ok", d.ok}, {"errors", d.errors}, {"covered", d.covered}, {"missing", d.missing}}),
         out, err);
  else
    emit(o, d.to_text(), out, err);
  return d.ok ? kExitOk : kExitInput;
}

int cmd_verify(const Options &o, std::ostream &out, std::ostream &err) {
  nlohmann::json suites = nlohmann::json::array();
  std::string text;
  bool pass = true;
  const bool all = o.suite == "all";

  if (all || o.suite == "classical" || o.suite == "rmatrix") {
    TensorOps ops = build_tensor_ops(build_algebra(o.algebra));
    std::vector<Report> reports;
    if (all || o.suite == "classical") {
      reports.push_back(verify_classical(ops));
      reports.push_back(verify_tensor_invariants(ops));
    }
    if (all || o.suite == "rmatrix")
      reports.push_back(verify_sigma_rmatrix(ops, o.order));
    for (const auto &r : reports) {
      pass = pass && r.all_pass();
      suites.push_back(r.to_json());
      text += r.to_text();
    }
  }
  if (all || o.suite == "transport") {
    EkTable table = resolve_table(o.table);
    std::vector<std::string> ids = o.identity.empty() ? transport::identity_ids() : std::vector{o.identity};
    for (const auto &id : ids) {
      auto r = transport::verify_identity(id, &table, {}, o.order);
      pass = pass && r.pass;
      suites.push_back(r.to_json());
      text += r.to_text();
    }
  }
  text += std::string("overall: ") + (pass ? "PASS" : "FAIL") + "\n";
  int rc = o.format == "json" ? emit(o, dump({{"pass", pass}, {"suites", suites}}), out, err) : emit(o, text, out, err);
  if (rc != kExitOk)
    return rc;
  return pass ? kExitOk : kExitFailed;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  Options o;
  CLI::App app{"Exact associator series and quantum Jacobi identity checks", "qjacobi"};
  app.require_subcommand(1);
  const auto formats = CLI::IsMember({"text", "json"});

  auto add_common = [&](CLI::App *sub, bool with_order) {
    sub->add_option("--format", o.format, "Output format: text or json")->check(formats);
    sub->add_option("--out", o.out, "Write output to this file instead of standard output");
    if (with_order)
      sub->add_option("-n,--order", o.order, "Truncation order N (series modulo h^N)")
          ->check(CLI::Range(2, 1000));
  };

  auto *psi = app.add_subcommand("psi", "Print Psi and Psi^-1 modulo h^N");
  add_common(psi, true);
  psi->add_option("--table", o.table, "E_k table: 'builtin' or a JSON file");
  psi->add_flag("--golden", o.golden, "Canonical text only, no notices");

  auto *verify = app.add_subcommand("verify", "Run a verification suite");
  add_common(verify, true);
  verify->add_option("suite", o.suite, "classical, rmatrix, transport or all")
      ->required()
      ->check(CLI::IsMember({"classical", "rmatrix", "transport", "all"}));
  verify->add_option("--algebra", o.algebra, "sl2, sl3 or a structure-constant JSON file");
  verify->add_option("--table", o.table, "E_k table for the series identities");
  verify->add_option("--identity", o.identity, "Restrict the transport suite to one identity")
      ->check(CLI::IsMember(transport::identity_ids()));

  auto *eval = app.add_subcommand("eval", "Evaluate Psi on an algebra's tensor cube");
  add_common(eval, true);
  eval->add_option("--algebra", o.algebra, "sl2, sl3 or a structure-constant JSON file");
  eval->add_option("--table", o.table, "E_k table: 'builtin' or a JSON file");

  auto *table = app.add_subcommand("table", "E_k table utilities");
  table->require_subcommand(1);
  auto *validate = table->add_subcommand("validate", "Check a table file");
  validate->add_option("path", o.path, "Table JSON file")->required();
  validate->add_option("--format", o.format, "Output format: text or json")->check(formats);
  validate->add_option("--out", o.out, "Write output to this file instead of standard output");

  auto *omega = app.add_subcommand("omega", "Omega matrix, trace and annihilating polynomial");
  add_common(omega, false);
  omega->add_option("--algebra", o.algebra, "sl2, sl3 or a structure-constant JSON file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (o.golden && o.format == "json") {
    err << "error: --golden applies to text output only\n";
    return kExitUsage;
  }

  try {
    if (psi->parsed())
      return cmd_psi(o, out, err);
    if (verify->parsed())
      return cmd_verify(o, out, err);
    if (eval->parsed())
      return cmd_eval(o, out, err);
    if (validate->parsed())
      return cmd_table_validate(o, out, err);
    if (omega->parsed())
      return cmd_omega(o, out, err);
  } catch (const AlgebraError &e) {
    err << "algebra error: " << e.what() << "\n";
    return kExitInput;
  } catch (const TableError &e) {
    err << "table error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}

} // namespace qjacobi
