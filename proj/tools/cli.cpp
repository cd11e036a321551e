#include "cli.hpp"

#include "boundwalk/boundary_verify.hpp"
#include "boundwalk/cat0_model.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <limits>
#include <iostream>
#include <memory>

namespace boundwalk::cli {

namespace {

using nlohmann::json;

struct Options {
  std::optional<std::size_t> dimension;
  std::string target;
  std::optional<std::size_t> phases;
  std::optional<std::size_t> prefix_length;
  std::string word_out, trace_out, report_out;
  bool verify = false;
  double tolerance_slack = 0.0;
  std::size_t min_phase_steps = SynthesisConfig{}.min_phase_steps;
  std::string scheme = "stride";
};

std::unique_ptr<std::ofstream> open_out(const std::string& path) {
  if (path.empty()) return nullptr;
  auto f = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
  if (!*f) throw BadInput("cannot open " + path + " for writing");
  return f;
}

class TraceWriter {
public:
  TraceWriter(std::ostream& out, std::size_t n) : out_(out) {
    out_ << "step,phase";
    for (std::size_t i = 1; i <= n; ++i) out_ << ",x" << i;
    for (std::size_t i = 1; i <= n; ++i) out_ << ",s" << i;
    out_ << ",distance\n";
  }

  void row(std::size_t step, std::size_t phase, const IntVec& x, const TargetSet& target) {
    const SpherePoint p = radial_project(std::span<const std::int64_t>(x));
    out_ << step << ',' << phase;
    for (auto v : x) out_ << ',' << v;
    for (double c : p.coords()) out_ << ',' << real(c);
    out_ << ',' << real(target.distance(p)) << '\n';
  }

private:
  static const char* real(double v) {
    static thread_local char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
  std::ostream& out_;
};

int execute(const Options& opt, std::ostream& out) {
  TargetSet target = load_target(opt.target, opt.dimension);
  SynthesisConfig config;
  config.min_phase_steps = opt.min_phase_steps;
  config.scheme = opt.scheme == "recursive" ? DirectedScheme::recursive : DirectedScheme::stride;

  const auto word_file = open_out(opt.word_out);
  const auto trace_file = open_out(opt.trace_out);
  const auto report_file = open_out(opt.report_out);

  SynthesisStream stream(std::move(target), config);
  std::optional<WordWriter> words;
  if (word_file) words.emplace(*word_file);
  std::optional<TraceWriter> trace;
  if (trace_file) trace.emplace(*trace_file, stream.target().dim());

  const bool reporting = opt.verify || report_file;
  // In prefix mode the phase count is not known up front; everything started
  // within the prefix is reported.
  const std::size_t watch = opt.phases ? *opt.phases : std::numeric_limits<std::size_t>::max();
  std::optional<ConvergenceMonitor> monitor;
  if (reporting) monitor.emplace(stream.target(), watch, VerifyConfig{opt.tolerance_slack});

  std::size_t current = 0;
  auto more = [&] {
    if (opt.phases) return stream.upcoming_phase() <= *opt.phases;
    return stream.steps() < *opt.prefix_length;
  };
  while (more()) {
    const int index = stream.next();
    if (stream.phase() != current) {
      current = stream.phase();
      if (words) words->flush_block();
    }
    if (words) words->put(index);
    if (trace) trace->row(stream.steps(), current, stream.position(), stream.target());
    if (monitor) monitor->observe(stream.steps(), current, stream.position());
  }
  if (words) words->flush_block();

  bool pass = true;
  if (monitor) {
    const bool closed = opt.phases.has_value() || stream.upcoming_phase() != current;
    ConvergenceReport report = monitor->finish(closed);
    if (!opt.phases) report.requested_phases = report.phases.size();
    if (report_file) *report_file << report.serialize();
    pass = report.pass();
    for (const auto& p : report.phases)
      out << "phase " << p.phase << ": d_H " << p.d_h << " tolerance " << p.tolerance
          << (p.complete ? "" : " (incomplete)") << (p.pass ? " pass" : " FAIL") << '\n';
  }
  out << "steps " << stream.steps() << ", phases started " << stream.phases_started() << '\n';
  for (auto* f : {word_file.get(), trace_file.get(), report_file.get()})
    if (f && !f->flush()) throw BadInput("write failed");
  return opt.verify && !pass ? kVerifyFailed : kOk;
}

}  // namespace

TargetSet read_target(std::istream& in, std::optional<std::size_t> dimension) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw BadInput(std::string("target: not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object()) throw BadInput("target: expected a JSON object");
    auto vertices = j.at("vertices").get<std::vector<std::vector<double>>>();
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    if (j.contains("edges"))
      for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw BadInput("target: edges must be index pairs");
        const auto a = e[0].get<long long>(), b = e[1].get<long long>();
        if (a < 0 || b < 0) throw BadInput("target: negative edge index");
        edges.emplace_back(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
      }
    const auto base = j.value("basepoint", 0LL);
    if (base < 0) throw BadInput("target: negative basepoint");
    std::optional<std::size_t> dim = dimension;
    if (j.contains("dimension")) {
      const auto d = j.at("dimension").get<long long>();
      if (d < 0) throw BadInput("target: negative dimension");
      if (dim && *dim != static_cast<std::size_t>(d))
        throw BadInput("target: dimension " + std::to_string(d) + " does not match --dimension " +
                       std::to_string(*dim));
      dim = static_cast<std::size_t>(d);
    }
    if (!dim) {
      if (vertices.empty()) throw BadInput("target: no vertices");
      dim = vertices.front().size();
    }
    return TargetSet(*dim, std::move(vertices), std::move(edges), static_cast<std::size_t>(base));
  } catch (const json::exception& e) {
    throw BadInput(std::string("target: ") + e.what());
  } catch (const std::domain_error& e) {
    throw BadInput(e.what());
  }
}

TargetSet load_target(const std::string& path, std::optional<std::size_t> dimension) {
  std::ifstream in(path);
  if (!in) throw BadInput("cannot read target file " + path);
  return read_target(in, dimension);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthesize a lattice walk whose projections accumulate on a target set."};
  Options opt;
  app.add_option("--dimension,-n", opt.dimension, "Ambient dimension n (>= 2)")->check(CLI::Range(2, 1 << 20));
  app.add_option("--target,-t", opt.target, "Target skeleton (JSON)")->required();
  auto* stop = app.add_option_group("stop", "Stopping criterion");
  stop->add_option("--phases", opt.phases, "Run this many complete phases")->check(CLI::PositiveNumber);
  stop->add_option("--prefix-length", opt.prefix_length, "Run this many steps")->check(CLI::PositiveNumber);
  stop->require_option(1);
  app.add_option("--word-out", opt.word_out, "Generator word, one block per line");
  app.add_option("--trace-out", opt.trace_out, "Per-step CSV trace");
  app.add_option("--report-out", opt.report_out, "Convergence report (key=value)");
  app.add_flag("--verify", opt.verify, "Exit 1 unless every phase meets its tolerance");
  app.add_option("--tolerance-slack", opt.tolerance_slack, "Added to every phase tolerance")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--min-phase-steps", opt.min_phase_steps, "Minimum steps per phase");
  app.add_option("--scheme", opt.scheme, "Directed approximation: stride or recursive")
      ->check(CLI::IsMember({"stride", "recursive"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }
  try {
    return execute(opt, out);
  } catch (const BadInput& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::length_error& e) {
    err << "error: walk too long to emit: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace boundwalk::cli
