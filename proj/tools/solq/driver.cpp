#include "solq/driver.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include "solq/eval.hpp"
#include "solq/frontend/elaborate.hpp"
#include "solq/frontend/parser.hpp"
#include "solq/mzn.hpp"
#include "solq/translate.hpp"

namespace solq::cli {

namespace fe = frontend;
namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot write " + path);
  f << text;
}

// Objects that go through translation and a backend.
std::optional<SolProjection> as_projection(const fe::Object& o) {
  if (auto* p = std::get_if<SolProjection>(&o)) return *p;
  if (auto* q = std::get_if<RankedQuery>(&o)) return sol::project(std::nullopt, {}, *q);
  if (auto* u = std::get_if<SolutionSet>(&o)) return sol::project(std::nullopt, {}, sol::as_query(*u));
  return std::nullopt;
}

Sink relation_sink(const std::string& name, const Relation& r) { return Sink{name, r.schema(), r.tuples(), {}}; }

class Runner {
 public:
  Runner(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

  void run(const std::vector<fe::Directive>& directives) {
    for (const auto& d : directives) {
      try {
        switch (d.kind) {
          case fe::Directive::Kind::Run: run_one(d); break;
          case fe::Directive::Kind::Emit: emit(d); break;
          case fe::Directive::Kind::Check: check(d); break;
        }
      } catch (const Error& e) {
        throw e.at(d.pos);
      }
    }
  }

  void finish() {
    std::string text;
    if (cfg_.format == OutputFormat::Json && !sinks_.empty()) {
      text = format_json(sinks_);
    } else {
      for (std::size_t i = 0; i < chunks_.size(); ++i) text += (i ? "\n" : "") + chunks_[i];
    }
    if (cfg_.output_path) write_file(*cfg_.output_path, text);
    else out_ << text;
  }

 private:
  Backend& backend() {
    if (backend_) return *backend_;
    if (cfg_.backend == BackendKind::MznSolve) {
      auto path = find_solver(cfg_);
      if (!path) {
        fail(ErrorKind::Io, "mzn-solve needs a solver: pass --solver-path or set SOLQ_SOLVER");
      }
      backend_ = std::make_unique<mzn::SolverBackend>(*path);
    } else {
      BruteForceOptions o;
      o.cap = cfg_.cap;
      o.jobs = cfg_.jobs;
      backend_ = std::make_unique<BruteForceBackend>(o);
    }
    return *backend_;
  }

  void add(Sink s) {
    if (cfg_.format == OutputFormat::Json) {
      sinks_.push_back(std::move(s));
      return;
    }
    chunks_.push_back(cfg_.format == OutputFormat::Csv ? format_csv(s) : format_table(s));
    sinks_.push_back(std::move(s));
  }

  static std::string model_text(const SolProjection& p) { return mzn::emit(phi::translate(p.query)).source; }

  void run_one(const fe::Directive& d) {
    if (auto p = as_projection(d.value)) {
      if (cfg_.backend == BackendKind::MznEmit) {
        chunks_.push_back(model_text(*p));
        return;
      }
      FlatForm ff = phi::translate(p->query);
      EvalOutcome outcome = backend().solve(ff);
      std::vector<std::string> attrs = p->attrs;
      if (attrs.empty()) attrs = p->query.set.candidate_schema().names();
      Relation r = reinstantiate(outcome, ff, attrs, p->rank_attr, d.sink);
      Sink s = relation_sink(d.sink, r);
      s.status = status_name(outcome.status);
      add(std::move(s));
      return;
    }
    if (auto* r = std::get_if<Relation>(&d.value)) return add(relation_sink(d.sink, *r));
    if (auto* q = std::get_if<adr::Sequence>(&d.value)) return add(Sink{d.sink, q->schema, q->tuples, {}});
    if (auto* c = std::get_if<CompleteRelation>(&d.value)) {
      cdr::ProjectOptions po;
      po.cap = cfg_.cap;
      return add(relation_sink(d.sink, cdr::project_eval(c->schema().names(), *c, po)));
    }
  }

  void emit(const fe::Directive& d) {
    auto p = as_projection(d.value);
    if (!p) {
      fail(ErrorKind::Type, std::string("emit needs a solution set or query, found a ") + fe::object_kind_name(d.value));
    }
    std::string text = model_text(*p);
    if (d.path.empty()) chunks_.push_back(text);
    else write_file(d.path, text);
  }

  static std::vector<Tuple> canonical(const Relation& r) {
    auto names = r.schema().names();
    std::sort(names.begin(), names.end());
    return adr::reorder(r, names).tuples();
  }

  bool equal(const fe::Directive& d) {
    const fe::Object& a = d.value;
    const fe::Object& b = *d.other;
    auto rel = [](const fe::Object& o) -> std::optional<Relation> {
      if (auto* r = std::get_if<Relation>(&o)) return *r;
      if (auto* s = std::get_if<adr::Sequence>(&o)) return Relation(s->name, s->schema, s->tuples);
      return std::nullopt;
    };
    auto ra = rel(a), rb = rel(b);
    if (ra && rb) return same_extension(*ra, *rb);
    bool ca = ra || std::holds_alternative<CompleteRelation>(a);
    bool cb = rb || std::holds_alternative<CompleteRelation>(b);
    if (ca && cb) {
      auto complete = [&](const fe::Object& o, const std::optional<Relation>& r) {
        return r ? cdr::from_adr(*r) : std::get<CompleteRelation>(o);
      };
      return cdr::equivalent(complete(a, ra), complete(b, rb), d.probes);
    }
    auto* ua = std::get_if<SolutionSet>(&a);
    auto* ub = std::get_if<SolutionSet>(&b);
    if (ua && ub) {
      if (!same_attribute_names(ua->candidate_schema(), ub->candidate_schema())) return false;
      std::set<std::vector<Tuple>> sa, sb;
      for (const auto& c : sol::enumerate(*ua, cfg_.cap)) sa.insert(canonical(c));
      for (const auto& c : sol::enumerate(*ub, cfg_.cap)) sb.insert(canonical(c));
      return sa == sb;
    }
    auto pa = as_projection(a), pb = as_projection(b);
    if (pa && pb) {
      BruteForceBackend bf(BruteForceOptions{cfg_.cap, cfg_.jobs});
      return same_extension(materialize(*pa, bf), materialize(*pb, bf));
    }
    fail(ErrorKind::Type, std::string("cannot compare a ") + fe::object_kind_name(a) + " with a " +
                              fe::object_kind_name(b));
  }

  void check(const fe::Directive& d) {
    bool ok = equal(d);
    std::string text = "check " + d.sink + " == " + d.other_name + ": " + (ok ? "true" : "false") + "\n";
    if (cfg_.format != OutputFormat::Json) chunks_.push_back(text);
    if (!ok) fail(ErrorKind::Evaluation, "check failed: " + d.sink + " == " + d.other_name);
  }

  const RunConfig& cfg_;
  std::ostream& out_;
  std::unique_ptr<Backend> backend_;
  std::vector<std::string> chunks_;
  std::vector<Sink> sinks_;
};

bool executable(const fs::path& p) {
  std::error_code ec;
  auto st = fs::status(p, ec);
  return !ec && fs::is_regular_file(st) && (st.permissions() & fs::perms::owner_exec) != fs::perms::none;
}

}  // namespace

std::optional<std::string> find_solver(const RunConfig& config) {
  if (config.solver_path) return config.solver_path;
  if (const char* env = std::getenv("SOLQ_SOLVER"); env && *env) return std::string(env);
  if (const char* path = std::getenv("PATH")) {
    std::string_view rest(path);
    while (!rest.empty()) {
      auto colon = rest.find(':');
      fs::path dir(std::string(rest.substr(0, colon)));
      if (executable(dir / "solq-minizinc")) return (dir / "solq-minizinc").string();
      if (colon == std::string_view::npos) break;
      rest.remove_prefix(colon + 1);
    }
  }
  return std::nullopt;
}

std::string render_error(const Error& e, const std::string& file) {
  std::string kind = error_kind_name(e.kind());
  for (auto& c : kind) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::string where = file;
  if (e.pos()) where += ":" + std::to_string(e.pos()->line) + ":" + std::to_string(e.pos()->column);
  return where + ": " + kind + ": " + e.what();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::string text = read_file(config.program_path);
    fe::Program prog;
    std::vector<fe::Directive> directives;
    fe::Catalog catalog;
    fe::ElabOptions opts;
    opts.cap = config.cap;
    opts.base_dir = fs::path(config.program_path).parent_path();
    if (opts.base_dir.empty()) opts.base_dir = ".";
    prog = fe::parse_program(text);
    directives = fe::elaborate(prog, catalog, opts);
    Runner runner(config, out);
    runner.run(directives);
    runner.finish();
    return 0;
  } catch (const Error& e) {
    err << render_error(e, config.program_path) << "\n";
    return is_user_error(e.kind()) ? 1 : 2;
  } catch (const std::exception& e) {
    err << config.program_path << ": internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace solq::cli
