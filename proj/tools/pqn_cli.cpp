// Command-line front end; all functionality is reached through the C API in
// pqn/pqn.h. Exit codes: 0 = verdict pass, 1 = verdict fail, 2 = usage or
// input error.

#include <pqn/pqn.h>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct ModelOpts {
  std::string model = "closed-toda";
  int n = 4;
  std::string potential;
  int kmax = -1;
};

struct OutputOpts {
  std::string format = "text";
  std::string outPath;
  bool timings = false;
};

void addModelOpts(CLI::App* cmd, ModelOpts& m) {
  cmd->add_option("--model", m.model, "closed-toda | open-toda | v-class")
      ->capture_default_str();
  cmd->add_option("--n", m.n, "number of particles")->capture_default_str();
  cmd->add_option("--potential", m.potential,
                  "v-class potential: V (formal), exp, 1/x, 1/x^2, or an "
                  "expression in x");
  cmd->add_option("--kmax", m.kmax, "largest trace invariant (default: model)");
}

void addOutputOpts(CLI::App* cmd, OutputOpts& o) {
  cmd->add_option("--format", o.format, "text | json")->capture_default_str();
  cmd->add_option("--out", o.outPath, "write the report to a file");
  cmd->add_flag("--timings", o.timings, "include timings in JSON output");
}

class ModelHandle {
public:
  ModelHandle(const ModelOpts& opts) {
    pqn_status st = pqn_model_create(opts.model.c_str(), opts.n,
                                     opts.potential.empty() ? nullptr
                                                            : opts.potential.c_str(),
                                     opts.kmax, &model_);
    if (st != PQN_OK) throw std::runtime_error(pqn_last_error());
  }
  explicit ModelHandle(pqn_model* m) : model_(m) {}
  ~ModelHandle() { pqn_model_destroy(model_); }
  ModelHandle(const ModelHandle&) = delete;
  ModelHandle& operator=(const ModelHandle&) = delete;
  pqn_model* get() const { return model_; }

private:
  pqn_model* model_ = nullptr;
};

std::string takeString(char* s) {
  std::string out = s ? s : "";
  pqn_string_free(s);
  return out;
}

void writeOut(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

int emitReport(pqn_report* report, const OutputOpts& out) {
  std::unique_ptr<pqn_report, decltype(&pqn_report_destroy)> guard(
      report, &pqn_report_destroy);
  char* rendered = nullptr;
  pqn_status st = pqn_report_render(report, out.format == "json" ? 1 : 0,
                                    out.timings ? 1 : 0, &rendered);
  if (st != PQN_OK) throw std::runtime_error(pqn_last_error());
  writeOut(takeString(rendered), out.outPath);
  return pqn_report_passed(report) ? 0 : 1;
}

void require(pqn_status st) {
  if (st != PQN_OK) throw std::runtime_error(pqn_last_error());
}

std::vector<double> parseStateList(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (!part.empty()) out.push_back(std::stod(part));
  }
  return out;
}

std::string readFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification toolkit for Poisson quasi-Nijenhuis lattice structures"};
  app.require_subcommand(1);

  ModelOpts model;
  OutputOpts output;
  int untwistPart = 2;
  std::string omegaSpec = "minus-Omega";
  unsigned seed = 0;
  int samples = 100;
  double fdStep = 1e-5, tol = 1e-6;
  double dt = 1e-3, tEnd = 10.0;
  int hamiltonian = 2;
  std::string x0Text, inPath, csvPath;
  bool forcePn = false;

  CLI::App* check = app.add_subcommand("check", "verify the structure axioms");
  addModelOpts(check, model);
  addOutputOpts(check, output);
  check->add_flag("--pn", forcePn, "check the torsionless-pair axioms instead");

  CLI::App* involution =
      app.add_subcommand("involution", "pairwise invariant brackets + recursion residuals");
  addModelOpts(involution, model);
  addOutputOpts(involution, output);

  CLI::App* suite = app.add_subcommand("toda-suite", "closed-lattice identity suite");
  addModelOpts(suite, model);
  addOutputOpts(suite, output);

  CLI::App* twist = app.add_subcommand("twist", "deform by a closed 2-form");
  addModelOpts(twist, model);
  addOutputOpts(twist, output);
  twist->add_option("--omega", omegaSpec, "minus-Omega | plus-Omega | zero")
      ->capture_default_str();

  CLI::App* untwist = app.add_subcommand("untwist", "converse deformation of a torsionless pair");
  addModelOpts(untwist, model);
  addOutputOpts(untwist, output);
  untwist->add_option("--omega", omegaSpec, "minus-Omega | plus-Omega | zero")
      ->capture_default_str();
  untwist->add_option("--part", untwistPart, "1 or 2")->capture_default_str();

  CLI::App* flow = app.add_subcommand("flow", "integrate a trace-invariant flow (RK4)");
  addModelOpts(flow, model);
  addOutputOpts(flow, output);
  flow->add_option("--dt", dt, "time step")->capture_default_str();
  flow->add_option("--T", tEnd, "final time")->capture_default_str();
  flow->add_option("--hamiltonian", hamiltonian, "flow of H_k (index k)")
      ->capture_default_str();
  flow->add_option("--x0", x0Text, "comma-separated initial state (length 2n)");
  flow->add_option("--csv", csvPath, "write the trajectory as CSV");
  flow->add_option("--tol", tol, "drift tolerance")->capture_default_str();

  CLI::App* oracle = app.add_subcommand("oracle", "numeric cross-checks at sampled points");
  addModelOpts(oracle, model);
  addOutputOpts(oracle, output);
  oracle->add_option("--seed", seed, "sampling seed")->capture_default_str();
  oracle->add_option("--samples", samples, "sample count")->capture_default_str();
  oracle->add_option("--fd-step", fdStep, "finite-difference step")->capture_default_str();
  oracle->add_option("--tol", tol, "relative tolerance")->capture_default_str();

  CLI::App* dump = app.add_subcommand("dump", "serialize a model structure to JSON");
  addModelOpts(dump, model);
  addOutputOpts(dump, output);

  CLI::App* load = app.add_subcommand("load", "load a structure file and re-serialize it");
  load->add_option("--in", inPath, "structure JSON path")->required();
  addOutputOpts(load, output);
  load->add_option("--kmax", model.kmax, "largest trace invariant");

  CLI::App* verify = app.add_subcommand("verify-all", "every check for one model");
  addModelOpts(verify, model);
  addOutputOpts(verify, output);
  verify->add_option("--seed", seed, "sampling seed")->capture_default_str();
  verify->add_option("--tol", tol, "numeric tolerance")->capture_default_str();

  CLI::App* canon = app.add_subcommand("canon", "parse and canonically re-print an expression");
  std::string exprText;
  canon->add_option("expression", exprText, "expression text")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    pqn_report* report = nullptr;
    if (check->parsed()) {
      ModelHandle m(model);
      require(pqn_check(m.get(), forcePn ? 1 : 0, &report));
      return emitReport(report, output);
    }
    if (involution->parsed()) {
      ModelHandle m(model);
      require(pqn_involution(m.get(), model.kmax, &report));
      return emitReport(report, output);
    }
    if (suite->parsed()) {
      ModelHandle m(model);
      require(pqn_toda_suite(m.get(), model.kmax, &report));
      return emitReport(report, output);
    }
    if (twist->parsed()) {
      ModelHandle m(model);
      require(pqn_twist(m.get(), omegaSpec.c_str(), &report));
      return emitReport(report, output);
    }
    if (untwist->parsed()) {
      ModelHandle m(model);
      require(pqn_untwist(m.get(), omegaSpec.c_str(), untwistPart, &report));
      return emitReport(report, output);
    }
    if (flow->parsed()) {
      ModelHandle m(model);
      std::vector<double> x0 = parseStateList(x0Text);
      char* csv = nullptr;
      require(pqn_flow(m.get(), dt, tEnd, model.kmax, hamiltonian,
                       x0.empty() ? nullptr : x0.data(), x0.size(), tol,
                       csvPath.empty() ? nullptr : &csv, &report));
      if (!csvPath.empty()) writeOut(takeString(csv), csvPath);
      return emitReport(report, output);
    }
    if (oracle->parsed()) {
      ModelHandle m(model);
      require(pqn_oracle(m.get(), seed, samples, fdStep, tol, &report));
      return emitReport(report, output);
    }
    if (dump->parsed()) {
      ModelHandle m(model);
      char* json = nullptr;
      require(pqn_model_to_json(m.get(), &json));
      writeOut(takeString(json), output.outPath);
      return 0;
    }
    if (load->parsed()) {
      std::string text = readFile(inPath);
      pqn_model* raw = nullptr;
      require(pqn_model_from_json(text.c_str(), model.kmax, &raw));
      ModelHandle m(raw);
      char* json = nullptr;
      require(pqn_model_to_json(m.get(), &json));
      writeOut(takeString(json), output.outPath);
      return 0;
    }
    if (verify->parsed()) {
      ModelHandle m(model);
      require(pqn_verify_all(m.get(), model.kmax, seed, tol, &report));
      return emitReport(report, output);
    }
    if (canon->parsed()) {
      char* out = nullptr;
      require(pqn_expr_canonical(exprText.c_str(), &out));
      std::cout << takeString(out) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
