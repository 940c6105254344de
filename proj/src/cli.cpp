#include "umt/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "umt/engine.hpp"
#include "umt/metamodel.hpp"
#include "umt/model.hpp"
#include "umt/planner.hpp"
#include "umt/spec.hpp"

namespace umt {

namespace {

struct Invocation {
  std::string command;
  std::vector<std::string> metamodels;
  std::string spec;
  std::string input;
  std::string output;
  std::vector<std::string> params;
  bool force = false;
  bool verify = false;
};

// Exception carrying the exit code it maps to.
struct Exit {
  int code;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class Session {
 public:
  Session(const Invocation& inv, std::ostream& out, std::ostream& err)
      : inv_(inv), out_(out), err_(err) {}

  int execute() {
    try {
      load();
      if (inv_.command == "check") return check();
      if (inv_.command == "plan") return plan();
      if (inv_.command == "run") return run_command();
      return verify();
    } catch (const Exit& e) {
      return e.code;
    }
  }

 private:
  [[noreturn]] void bail(int code, const std::string& message) {
    err_ << "error: " << message << "\n";
    throw Exit{code};
  }

  void load() {
    std::vector<Metamodel> mms;
    for (const auto& path : inv_.metamodels) {
      try {
        mms.push_back(parse_metamodel(read_file(path), std::filesystem::path(path).stem().string()));
      } catch (const Error& e) {
        bail(kExitInvalid, path + ": " + e.what());
      }
    }
    auto schema = std::make_shared<const Schema>(std::move(mms));
    const auto diags = validate(*schema);
    if (!diags.empty()) {
      for (const auto& d : diags) {
        err_ << "error: " << d.rule << " at " << d.location << ": " << d.message << "\n";
      }
      throw Exit{kExitInvalid};
    }
    schema_ = schema;
    try {
      spec_ = parse_spec(read_file(inv_.spec), schema_);
    } catch (const Error& e) {
      bail(kExitInvalid, inv_.spec + ": " + e.what());
    }
    if (inv_.input.empty()) {
      input_.emplace(schema_);
    } else {
      try {
        input_.emplace(parse_model(read_file(inv_.input), schema_));
      } catch (const Error& e) {
        bail(kExitInvalid, inv_.input + ": " + e.what());
      }
    }
  }

  std::map<std::string, Value> params() {
    std::map<std::string, std::string> raw;
    for (const auto& p : inv_.params) {
      const auto eq = p.find('=');
      if (eq == std::string::npos) bail(kExitInvalid, "--param expects name=value, got '" + p + "'");
      raw[p.substr(0, eq)] = p.substr(eq + 1);
    }
    try {
      return bind_parameters(*spec_, raw);
    } catch (const Error& e) {
      bail(kExitInvalid, e.what());
    }
  }

  Plan make_plan() {
    try {
      return derive_plan(*spec_);
    } catch (const Error& e) {
      bail(kExitInvalid, e.what());
    }
  }

  bool assumptions_hold(const std::map<std::string, Value>& values, std::ostream& report) {
    bool ok = true;
    try {
      for (const auto& v : check_assumptions(*spec_, *input_, values)) {
        if (v.passed) {
          report << "assumption " << v.label << ": ok\n";
        } else {
          ok = false;
          err_ << "error: assumption " << v.label << " fails";
          if (v.witness && !v.witness->binding.empty()) err_ << " for " << describe_binding(*input_, *v.witness);
          err_ << ": " << v.text << "\n";
        }
      }
    } catch (const Error& e) {
      bail(kExitRuntime, e.what());
    }
    return ok;
  }

  int check() {
    const auto values = params();
    out_ << "transformation " << (spec_->name.empty() ? "-" : spec_->name) << ": "
         << spec_->constraints.size() << " constraint(s), " << spec_->assumptions.size()
         << " assumption(s)\n";
    for (const auto& c : spec_->constraints) {
      out_ << "constraint " << c.label << ": " << to_string(c.kind) << "\n";
    }
    return assumptions_hold(values, out_) ? kExitOk : kExitAssumption;
  }

  int plan() {
    const Plan p = make_plan();
    out_ << print_plan(p);
    return p.all_ok() ? kExitOk : kExitRejected;
  }

  bool report_verdicts(const std::vector<ConstraintVerdict>& verdicts, const ModelState& st,
                       std::ostream& report) {
    bool ok = true;
    for (const auto& v : verdicts) {
      if (v.passed) {
        report << "constraint " << v.label << ": holds\n";
        continue;
      }
      ok = false;
      err_ << "error: constraint " << v.label << " fails";
      if (v.witness && !v.witness->binding.empty()) err_ << " for " << describe_binding(st, *v.witness);
      err_ << ": " << v.text << "\n";
    }
    return ok;
  }

  int run_command() {
    if (inv_.output.empty()) bail(kExitInvalid, "run needs -o <file> or -o -");
    const auto values = params();
    std::ostream& report = inv_.output == "-" ? err_ : out_;
    if (!inv_.force && !assumptions_hold(values, report)) return kExitAssumption;
    const Plan p = make_plan();
    if (!p.all_ok()) {
      for (std::size_t i = 0; i < p.phases.size(); ++i) {
        const Phase& ph = p.phases[i];
        for (const auto& r : ph.verdict.reasons) {
          err_ << (inv_.force ? "warning: " : "error: ") << ph.constraint.label << ": "
               << describe(r) << "\n";
        }
      }
      if (!inv_.force) return kExitRejected;
    }
    std::optional<RunResult> result;
    try {
      result.emplace(run(p, *input_, values, RunOptions{inv_.force}));
    } catch (const Error& e) {
      bail(kExitRuntime, e.what());
    }
    const std::string text = serialize_model(result->final_state);
    if (inv_.output == "-") {
      out_ << text;
    } else {
      std::ofstream file(inv_.output, std::ios::binary);
      file << text;
      if (!file) bail(kExitRuntime, "cannot write '" + inv_.output + "'");
    }
    if (!inv_.verify) return kExitOk;
    bool ok = false;
    try {
      ok = report_verdicts(verify_cons(*spec_, *result, values), result->final_state, report);
    } catch (const Error& e) {
      bail(kExitRuntime, e.what());
    }
    return ok ? kExitOk : kExitVerify;
  }

  int verify() {
    if (inv_.output.empty()) bail(kExitInvalid, "verify needs the output model (-o)");
    const auto values = params();
    std::optional<ModelState> produced;
    try {
      produced.emplace(parse_model(read_file(inv_.output), schema_, &*input_));
    } catch (const Error& e) {
      bail(kExitInvalid, inv_.output + ": " + e.what());
    }
    bool ok = false;
    try {
      ok = report_verdicts(verify_cons(*spec_, *produced, *input_, values), *produced, out_);
    } catch (const Error& e) {
      bail(kExitRuntime, e.what());
    }
    return ok ? kExitOk : kExitVerify;
  }

  const Invocation& inv_;
  std::ostream& out_;
  std::ostream& err_;
  std::shared_ptr<const Schema> schema_;
  std::optional<TransformationSpec> spec_;
  std::optional<ModelState> input_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Invocation inv;
  CLI::App app{"Runs constraint-specified model transformations.", "umt"};
  app.add_option("command", inv.command, "check | plan | run | verify")
      ->required()
      ->check(CLI::IsMember({"check", "plan", "run", "verify"}));
  app.add_option("-m,--metamodel", inv.metamodels, "metamodel file (one or two)")
      ->required()
      ->expected(1, 2)
      ->allow_extra_args(false)
      ->take_all();
  app.add_option("-s,--spec", inv.spec, "transformation spec")->required();
  app.add_option("-i,--input", inv.input, "input model (empty model when omitted)");
  app.add_option("-o,--output", inv.output, "output model, or - for standard output");
  app.add_option("--param", inv.params, "parameter value as name=value")->allow_extra_args(false);
  app.add_flag("--force", inv.force, "skip assumption checks and run rejected phases");
  app.add_flag("--verify", inv.verify, "check the constraints on the result of run");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitInvalid;
  }
  return Session(inv, out, err).execute();
}

}  // namespace umt
