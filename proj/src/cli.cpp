#include "tensorial/cli.hpp"

#include "CLI11.hpp"
#include "tensorial/bm.hpp"
#include "tensorial/bodyfile.hpp"
#include "tensorial/calculus.hpp"
#include "tensorial/lowner.hpp"
#include "tensorial/products.hpp"
#include "tensorial/reproduce.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace tensorial {

using nlohmann::json;

namespace {

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

Vec parse_csv(const std::string& s, int dim) {
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t used = 0;
      vals.push_back(std::stod(tok, &used));
      if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InputError("bad number '" + tok + "' in vector");
    }
  }
  if (static_cast<int>(vals.size()) != dim)
    throw InputError("vector has " + std::to_string(vals.size()) + " entries, body has dimension " + std::to_string(dim));
  return Eigen::Map<Vec>(vals.data(), dim);
}

json matrix_json(const Mat& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    out.push_back(r);
  }
  return out;
}

json map_json(const FactorMap& t) {
  json f = json::array();
  for (const Mat& m : t.factors()) f.push_back(matrix_json(m));
  return {{"factors", f}, {"perm", t.perm()}, {"shape", t.source().dims()}};
}

struct Ctx {
  std::ostream& out;
  std::string output;  // -o; stdout when empty
  std::string shape;   // --shape override for inputs

  Body load(const std::string& path) const {
    Body b = read_body_file(path);
    if (!shape.empty()) {
      TensorShape s = TensorShape::parse(shape);
      if (s.total() != b.dim()) throw InputError("--shape " + s.str() + " does not match dimension " + std::to_string(b.dim()));
      b = b.with_shape(s);
    }
    return b;
  }
  void emit(const Body& b) const {
    if (output.empty())
      out << emit_body(b) << "\n";
    else
      write_body_file(b, output);
  }
};

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tensor products of symmetric convex bodies"};
  app.name("tensorial");
  app.require_subcommand(1);
  Ctx ctx{out, "", ""};
  int code = kExitOk;
  std::function<void()> action;

  auto body_out = [&](CLI::App* c) { c->add_option("-o,--output", ctx.output, "output body file (default stdout)"); };
  auto shape_opt = [&](CLI::App* c) { c->add_option("--shape", ctx.shape, "tensor shape for the inputs, e.g. 2x3"); };

  // make
  std::string make_kind, p_str = "2";
  int dim = 0, gens = 0;
  double radius = 1;
  std::uint64_t seed = 1;
  std::string make_shape;
  {
    auto* c = app.add_subcommand("make", "build a standard or random body");
    c->add_option("--kind", make_kind, "lp-ball | random-polytope")->required();
    c->add_option("--p", p_str, "1, 2 or inf (lp-ball)");
    c->add_option("--dim", dim, "dimension")->required();
    c->add_option("--radius", radius, "scale factor (lp-ball)");
    c->add_option("--gens", gens, "generator pairs (random-polytope)");
    c->add_option("--seed", seed, "random seed");
    c->add_option("--tensor-shape", make_shape, "attach a tensor shape, e.g. 2x2");
    body_out(c);
    c->callback([&] {
      action = [&] {
        Body b;
        if (make_kind == "lp-ball") {
          double p = p_str == "inf" ? INFINITY : std::stod(p_str);
          b = lp_ball(p, dim, radius);
        } else if (make_kind == "random-polytope") {
          Rng rng(seed);
          b = random_polytope(dim, gens > 0 ? gens : dim + 2, rng);
        } else {
          throw InputError("unknown kind '" + make_kind + "' (expected lp-ball or random-polytope)");
        }
        if (!make_shape.empty()) b = b.with_shape(TensorShape::parse(make_shape));
        ctx.emit(b);
      };
    });
  }

  // tensor
  std::string op;
  std::vector<std::string> files;
  {
    auto* c = app.add_subcommand("tensor", "projective, injective or Hilbertian product of 2 or 3 bodies");
    c->add_option("--op", op, "pi | eps | l2")->required();
    c->add_option("factors", files, "factor body files")->required()->expected(2, 3);
    body_out(c);
    c->callback([&] {
      action = [&] {
        std::vector<Body> f;
        for (const auto& path : files) f.push_back(ctx.load(path));
        if (op == "pi")
          ctx.emit(projective_product(f));
        else if (op == "eps")
          ctx.emit(injective_product(f));
        else if (op == "l2")
          ctx.emit(hilbert_product(f));
        else
          throw InputError("unknown --op '" + op + "' (expected pi, eps or l2)");
      };
    });
  }

  // gauge / support
  std::string file_a, file_b, vec_str;
  for (const char* name : {"gauge", "support"}) {
    const bool is_gauge = std::string(name) == "gauge";
    auto* c = app.add_subcommand(name, is_gauge ? "Minkowski functional at a point" : "support function in a direction");
    c->add_option("body", file_a)->required();
    c->add_option(is_gauge ? "--point" : "--direction", vec_str, "comma-separated coordinates")->required();
    c->callback([&, is_gauge] {
      action = [&, is_gauge] {
        Body b = ctx.load(file_a);
        Vec x = parse_csv(vec_str, b.dim());
        out << num(is_gauge ? gauge(b, x) : support(b, x)) << "\n";
      };
    });
  }

  // unary body -> body commands
  struct Unary {
    const char* name;
    const char* help;
    std::function<Body(const Body&)> f;
  };
  const std::vector<Unary> unary{
      {"polar", "polar body", [](const Body& b) { return polar(b); }},
      {"lowner", "Loewner ellipsoid", [](const Body& b) { return lowner(b); }},
      {"convtensor", "hull of the decomposable points of a tensorial body", [](const Body& b) { return conv_tensor(b); }},
      {"elltensor", "Loewner ellipsoid of conv_tensor", [](const Body& b) { return ell_tensor(b); }},
      {"eta", "retraction onto tensorial bodies", [](const Body& b) { return eta_retract(b); }},
  };
  for (const Unary& u : unary) {
    auto* c = app.add_subcommand(u.name, u.help);
    c->add_option("body", file_a)->required();
    body_out(c);
    shape_opt(c);
    auto f = u.f;
    c->callback([&, f] { action = [&, f] { ctx.emit(f(ctx.load(file_a))); }; });
  }

  // normalize
  std::string map_file;
  {
    auto* c = app.add_subcommand("normalize", "move a tensorial body into the slice (Loewner position of conv_tensor)");
    c->add_option("body", file_a)->required();
    c->add_option("--map", map_file, "also write the factor map A as JSON");
    body_out(c);
    shape_opt(c);
    c->callback([&] {
      action = [&] {
        SliceNormalized n = slice_normalize(ctx.load(file_a));
        if (!map_file.empty()) {
          std::ofstream m(map_file);
          if (!m) throw InputError("cannot write '" + map_file + "'");
          m << map_json(n.map).dump(2) << "\n";
        }
        ctx.emit(n.body);
      };
    });
  }

  // sum / hausdorff
  {
    auto* c = app.add_subcommand("sum", "Minkowski sum");
    c->add_option("a", file_a)->required();
    c->add_option("b", file_b)->required();
    body_out(c);
    shape_opt(c);
    c->callback([&] { action = [&] { ctx.emit(minkowski_sum(ctx.load(file_a), ctx.load(file_b))); }; });
  }
  {
    auto* c = app.add_subcommand("hausdorff", "Hausdorff distance");
    c->add_option("a", file_a)->required();
    c->add_option("b", file_b)->required();
    c->callback([&] {
      action = [&] {
        Hausdorff h = hausdorff(ctx.load(file_a), ctx.load(file_b));
        out << num(h.value) << "\n";
        if (!h.exact) err << "note: sampled estimate (lower bound), error " << num(h.error) << "\n";
      };
    });
  }

  // certify
  int probes = 200;
  {
    auto* c = app.add_subcommand("certify", "decide whether a body is tensorial; exit 1 when rejected");
    c->add_option("body", file_a)->required();
    c->add_option("--probes", probes, "random decomposable probes");
    c->add_option("--seed", seed, "probe seed");
    shape_opt(c);
    c->callback([&] {
      action = [&] {
        Certificate cert = certify_tensorial(ctx.load(file_a), probes, seed);
        json j = {{"accepted", cert.accepted},
                  {"lower_violation", cert.lower_violation},
                  {"upper_violation", cert.upper_violation},
                  {"factorization_error", cert.factorization_error},
                  {"probes", cert.probe_count},
                  {"scale", cert.scale},
                  {"exact", cert.exact},
                  {"tolerance", kCertifyTol}};
        out << j.dump(2) << "\n";
        if (!cert.accepted) code = kExitRejected;
      };
    });
  }

  // bm
  std::string mode = "tensorial";
  int restarts = 16;
  {
    auto* c = app.add_subcommand("bm", "Banach-Mazur distance estimate (upper bound)");
    c->add_option("a", file_a)->required();
    c->add_option("b", file_b)->required();
    c->add_option("--mode", mode, "classical | tensorial");
    c->add_option("--restarts", restarts, "multistart count");
    c->add_option("--seed", seed, "random seed");
    shape_opt(c);
    c->callback([&] {
      action = [&] {
        BmResult r = bm_estimate(ctx.load(file_a), ctx.load(file_b), parse_bm_mode(mode), restarts, seed);
        json j = {{"lambda", r.lambda}, {"converged", r.converged}, {"evaluations", r.evaluations},
                  {"exact_evaluation", r.exact_evaluation}, {"map", map_json(r.map)}};
        out << num(r.lambda) << "\n" << j.dump(2) << "\n";
      };
    });
  }

  // path / homotopy
  double t = 0;
  std::string hkind;
  {
    auto* c = app.add_subcommand("path", "polygonal path between two tensorial bodies");
    c->add_option("p", file_a)->required();
    c->add_option("r", file_b)->required();
    c->add_option("--t", t, "parameter in [0, 1]")->required();
    body_out(c);
    shape_opt(c);
    c->callback([&] { action = [&] { ctx.emit(polygonal_path(ctx.load(file_a), ctx.load(file_b), t)); }; });
  }
  {
    auto* c = app.add_subcommand("homotopy", "evaluate a contraction homotopy");
    c->add_option("body", file_a)->required();
    c->add_option("--kind", hkind, "W | F | G")->required();
    c->add_option("--t", t, "parameter in [0, 1]")->required();
    body_out(c);
    shape_opt(c);
    c->callback([&] { action = [&] { ctx.emit(homotopy_eval(parse_homotopy(hkind), ctx.load(file_a), t)); }; });
  }

  // reproduce
  std::string report_file;
  int jobs = 1;
  std::uint64_t suite_seed = 2024;
  {
    auto* c = app.add_subcommand("reproduce", "run every acceptance check and write a JSON report");
    c->add_option("--out", report_file, "report file")->required();
    c->add_option("--jobs", jobs, "worker threads");
    c->add_option("--seed", suite_seed, "suite seed");
    c->callback([&] {
      action = [&] {
        Report r = reproduce_suite(jobs, suite_seed);
        std::ofstream f(report_file);
        if (!f) throw InputError("cannot write '" + report_file + "'");
        f << report_to_json(r).dump(2) << "\n";
        for (const CheckRecord& rec : r.checks)
          out << rec.id << " " << (rec.pass ? "PASS" : "FAIL") << " " << rec.anchor << (rec.error.empty() ? "" : " [" + rec.error + "]") << "\n";
        if (!r.all_pass()) code = kExitRejected;
      };
    });
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  try {
    action();
  } catch (const InputError& e) {  // includes PreconditionError
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const CapError& e) {
    err << "cap exceeded: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return code;
}

}  // namespace tensorial
