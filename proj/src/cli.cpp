#include "carnotkit/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "carnotkit/abnormality.hpp"
#include "carnotkit/automorphy.hpp"
#include "carnotkit/catalog.hpp"
#include "carnotkit/cloud_io.hpp"
#include "carnotkit/control.hpp"
#include "carnotkit/dsl.hpp"
#include "carnotkit/semigroup.hpp"

namespace carnotkit {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CarnotError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// Builtin name first, otherwise an algebra-definition file.
AlgebraPtr resolve_algebra(const std::string& spec) {
  if (auto tag = parse_spec_tag(spec)) return make_algebra(*tag);
  AlgebraDocument doc = parse_algebra_file(read_file(spec));
  if (!doc.ok()) {
    std::ostringstream os;
    os << "'" << spec << "' is not a builtin and does not parse cleanly:";
    for (const auto& d : doc.diagnostics)
      os << "\n  " << d.line << ":" << d.column << ": " << d.message;
    throw CarnotError(os.str());
  }
  return doc.algebra;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::vector<double> parse_double_vec(const std::string& text) {
  std::vector<double> out;
  for (const auto& cell : split(text, ',')) {
    try {
      out.push_back(std::stod(cell));
    } catch (...) {
      throw CarnotError("cannot parse number '" + cell + "'");
    }
  }
  return out;
}

std::vector<Rat> parse_rat_vec(const std::string& text) {
  std::vector<Rat> out;
  for (const auto& cell : split(text, ',')) {
    auto r = parse_rational(cell);
    if (!r) throw CarnotError("cannot parse rational '" + cell + "'");
    out.push_back(*r);
  }
  return out;
}

DblElement horizontal_element(const AlgebraPtr& alg, const std::vector<double>& g1_coords) {
  const auto& g1 = alg->layer_indices(1);
  if (g1_coords.size() != g1.size())
    throw CarnotError("direction needs " + std::to_string(g1.size()) +
                      " horizontal coordinates, got " + std::to_string(g1_coords.size()));
  DblElement e = zero<double>(alg);
  for (std::size_t j = 0; j < g1.size(); ++j) e.coeffs[g1[j]] = g1_coords[j];
  return e;
}

/// "dur:c1,c2;dur:c1,c2" with rational entries (exact end points).
HorizontalControl<Rat> parse_control(const AlgebraPtr& alg, const std::string& text) {
  HorizontalControl<Rat> control;
  const auto& g1 = alg->layer_indices(1);
  for (const auto& piece_text : split(text, ';')) {
    if (piece_text.empty()) continue;
    auto colon = piece_text.find(':');
    if (colon == std::string::npos)
      throw CarnotError("control piece '" + piece_text + "' lacks 'duration:coords'");
    auto dur = parse_rational(piece_text.substr(0, colon));
    if (!dur || !(*dur > 0)) throw CarnotError("piece duration must be a positive rational");
    std::vector<Rat> coords = parse_rat_vec(piece_text.substr(colon + 1));
    if (coords.size() != g1.size())
      throw CarnotError("piece direction needs " + std::to_string(g1.size()) + " coordinates");
    RatElement dir = zero<Rat>(alg);
    for (std::size_t j = 0; j < g1.size(); ++j) dir.coeffs[g1[j]] = coords[j];
    control.pieces.push_back({*dur, std::move(dir)});
  }
  if (control.pieces.empty()) throw CarnotError("control has no pieces");
  return control;
}

/// "[inv:]cap:<coords>:<radius>" | "[inv:]half:<nu>[:strict]" |
/// "[inv:]cloud:<path>:<tolerance>"
ConeSpec parse_cone(const AlgebraPtr& alg, std::string text) {
  bool inverse = false;
  if (text.rfind("inv:", 0) == 0) {
    inverse = true;
    text = text.substr(4);
  }
  ConeSpec spec;
  if (text.rfind("cap:", 0) == 0) {
    auto rest = text.substr(4);
    auto colon = rest.rfind(':');
    if (colon == std::string::npos) throw CarnotError("cap cone needs 'cap:<coords>:<radius>'");
    std::vector<double> coords = parse_double_vec(rest.substr(0, colon));
    if (static_cast<int>(coords.size()) != alg->dim())
      throw CarnotError("cap center needs " + std::to_string(alg->dim()) + " coordinates");
    double radius = std::stod(rest.substr(colon + 1));
    spec = cap_cone(make_element(alg, std::move(coords)), radius);
  } else if (text.rfind("half:", 0) == 0) {
    auto rest = text.substr(5);
    bool strict = false;
    auto colon = rest.rfind(':');
    if (colon != std::string::npos && rest.substr(colon + 1) == "strict") {
      strict = true;
      rest = rest.substr(0, colon);
    }
    spec = halfspace_cone(parse_double_vec(rest), strict);
  } else if (text.rfind("cloud:", 0) == 0) {
    auto rest = text.substr(6);
    auto colon = rest.rfind(':');
    if (colon == std::string::npos) throw CarnotError("cloud cone needs 'cloud:<path>:<tol>'");
    double tol = std::stod(rest.substr(colon + 1));
    spec = cloud_cone(load_points(alg, rest.substr(0, colon)), tol);
  } else {
    throw CarnotError("unknown cone spec '" + text + "' (cap:, half:, cloud:)");
  }
  if (inverse) spec = inverted(spec);
  return spec;
}

void print_info(std::ostream& out, const AlgebraPtr& alg) {
  out << "algebra:   " << alg->name() << "\n";
  out << "dimension: " << alg->dim() << "\n";
  out << "step:      " << alg->step() << "\n";
  out << "layers:    ";
  for (std::size_t k = 0; k < alg->layer_dims().size(); ++k)
    out << (k ? " " : "") << alg->layer_dims()[k];
  out << "\n";
  out << "homogeneous dimension Q: " << alg->homogeneous_dim() << "\n";
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"carnotkit: stratified Lie algebra and Carnot group toolkit"};
  app.require_subcommand(1);
  int exit_code = 0;

  // validate
  auto* cmd_validate = app.add_subcommand("validate", "check an algebra file");
  std::string validate_path;
  cmd_validate->add_option("file", validate_path, "algebra definition file")->required();
  cmd_validate->callback([&] {
    AlgebraDocument doc = parse_algebra_file(read_file(validate_path));
    if (doc.ok()) {
      out << "valid: " << doc.algebra->name() << " (dim " << doc.algebra->dim() << ", step "
          << doc.algebra->step() << ")\n";
      return;
    }
    bool parse_trouble = false;
    for (const auto& d : doc.diagnostics) {
      out << validate_path << ":" << d.line << ":" << d.column << ": " << d.message << "\n";
      if (d.phase == Diagnostic::Phase::parse) parse_trouble = true;
    }
    exit_code = parse_trouble ? 2 : 1;
  });

  // info
  auto* cmd_info = app.add_subcommand("info", "dimensions, step, homogeneous dimension");
  std::string info_spec;
  cmd_info->add_option("algebra", info_spec, "builtin name or file")->required();
  cmd_info->callback([&] { print_info(out, resolve_algebra(info_spec)); });

  // abnormal
  auto* cmd_abnormal = app.add_subcommand("abnormal", "abnormal horizontal directions");
  std::string abnormal_spec;
  int scan_resolution = 360;
  bool filiform_exact = false;
  double scan_tol = 1e-8;
  cmd_abnormal->add_option("algebra", abnormal_spec)->required();
  auto* scan_opt = cmd_abnormal->add_option("--scan", scan_resolution, "sphere scan resolution");
  cmd_abnormal->add_flag("--filiform-exact", filiform_exact,
                         "exact line enumeration (filiform only)");
  cmd_abnormal->add_option("--tol", scan_tol, "SVD rank threshold");
  scan_opt->excludes("--filiform-exact");
  cmd_abnormal->callback([&] {
    AlgebraPtr alg = resolve_algebra(abnormal_spec);
    if (filiform_exact) {
      auto lines = abnormal_directions_filiform(alg);
      out << lines.size() << " abnormal horizontal line(s)\n";
      for (const auto& line : lines) out << "  line of " << to_string(line) << "\n";
      return;
    }
    ScanReport report = scan_abnormal_directions(alg, scan_resolution, scan_tol);
    out << report.abnormal_count << "/" << report.resolution << " abnormal\n";
    for (std::size_t i = 0; i < report.samples.size(); ++i) {
      const auto& s = report.samples[i];
      if (s.abnormal)
        out << "  sample " << i << ": " << to_string(s.direction) << " span " << s.span_dim
            << "/" << alg->dim() << "\n";
    }
  });

  // autdim
  auto* cmd_autdim = app.add_subcommand("autdim", "graded derivation space dimension");
  std::string autdim_spec;
  cmd_autdim->add_option("algebra", autdim_spec)->required();
  cmd_autdim->callback([&] { out << graded_derivation_dimension(resolve_algebra(autdim_spec)) << "\n"; });

  // autext
  auto* cmd_autext = app.add_subcommand("autext", "extend a first-layer map to an automorphism");
  std::string autext_spec, matrix_text;
  cmd_autext->add_option("algebra", autext_spec)->required();
  cmd_autext->add_option("--matrix", matrix_text, "row-major m*m rational entries")->required();
  cmd_autext->callback([&] {
    AlgebraPtr alg = resolve_algebra(autext_spec);
    std::vector<Rat> entries = parse_rat_vec(matrix_text);
    const int m = alg->rank();
    if (static_cast<int>(entries.size()) != m * m)
      throw CarnotError("--matrix needs " + std::to_string(m * m) + " entries");
    RatMat matrix(m, RatVec(m));
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) matrix[r][c] = entries[r * m + c];
    ExtensionResult res = extend_graded_map({alg, matrix});
    if (res.status == ExtensionResult::Status::automorphism) {
      out << "automorphism; full map columns = images of basis vectors\n";
      for (int r = 0; r < alg->dim(); ++r) {
        for (int c = 0; c < alg->dim(); ++c)
          out << (c ? " " : "  ") << to_string(res.full_map[r][c]);
        out << "\n";
      }
    } else {
      out << "obstructed: " << res.obstruction << "\n";
      exit_code = 1;
    }
  });

  // endpoint
  auto* cmd_endpoint = app.add_subcommand("endpoint", "end point of a piecewise-constant control");
  std::string endpoint_spec, control_text;
  cmd_endpoint->add_option("algebra", endpoint_spec)->required();
  cmd_endpoint->add_option("--control", control_text, "dur:coords;dur:coords (rationals)")
      ->required();
  cmd_endpoint->callback([&] {
    AlgebraPtr alg = resolve_algebra(endpoint_spec);
    HorizontalControl<Rat> control = parse_control(alg, control_text);
    out << to_string(endpoint(alg, control)) << "\n";
  });

  // jacobian-rank
  auto* cmd_jac = app.add_subcommand("jacobian-rank", "numerical end-point differential rank");
  std::string jac_spec, jac_dir;
  int jac_pieces = 8;
  double jac_h = 1e-5, jac_tol = 1e-8;
  cmd_jac->add_option("algebra", jac_spec)->required();
  cmd_jac->add_option("--direction", jac_dir, "horizontal coordinates")->required();
  cmd_jac->add_option("--pieces", jac_pieces, "control subdivisions");
  cmd_jac->add_option("--fd-step", jac_h, "finite-difference step");
  cmd_jac->add_option("--tol", jac_tol, "SVD rank threshold");
  cmd_jac->callback([&] {
    AlgebraPtr alg = resolve_algebra(jac_spec);
    DblElement x = horizontal_element(alg, parse_double_vec(jac_dir));
    int rank = endpoint_jacobian_rank(x, jac_pieces, jac_h, jac_tol);
    out << "jacobian rank " << rank << " of " << alg->dim() << " (ad-chain span "
        << ad_chain_span_dim(x, jac_tol) << ")\n";
  });

  // sample
  auto* cmd_sample = app.add_subcommand("sample", "sample the horizontal-normal semigroup");
  std::string sample_spec, nu_text, out_path, format_text = "csv";
  SemigroupParams params;
  cmd_sample->add_option("algebra", sample_spec)->required();
  cmd_sample->add_option("--nu", nu_text, "horizontal normal coordinates")->required();
  cmd_sample->add_option("--count", params.count, "number of points")->required();
  cmd_sample->add_option("--seed", params.seed, "RNG seed");
  cmd_sample->add_option("--max-pieces", params.max_pieces, "max control pieces");
  cmd_sample->add_option("--cap", params.magnitude_cap, "direction magnitude scale");
  cmd_sample->add_option("--out", out_path, "output file")->required();
  cmd_sample->add_option("--format", format_text)->check(CLI::IsMember({"csv", "json"}));
  cmd_sample->callback([&] {
    AlgebraPtr alg = resolve_algebra(sample_spec);
    SemigroupCloud cloud = sample_semigroup(alg, parse_double_vec(nu_text), params);
    export_cloud_file(cloud, out_path,
                      format_text == "json" ? CloudFormat::json : CloudFormat::csv);
    out << "wrote " << cloud.points.size() << " points to " << out_path << "\n";
  });

  // conecheck
  auto* cmd_cone = app.add_subcommand("conecheck", "outer cone property of a point set");
  std::string cone_spec_alg, gamma_path, cone_text;
  cmd_cone->add_option("algebra", cone_spec_alg)->required();
  cmd_cone->add_option("--gamma", gamma_path, "point set file (csv or json)")->required();
  cmd_cone->add_option("--cone", cone_text, "cap:...|half:...|cloud:... (prefix inv: to invert)")
      ->required();
  cmd_cone->callback([&] {
    AlgebraPtr alg = resolve_algebra(cone_spec_alg);
    std::vector<DblElement> gamma = load_points(alg, gamma_path);
    ConeSpec spec = parse_cone(alg, cone_text);
    ConePropertyResult res = cone_property_check(alg, gamma, spec);
    if (res.holds) {
      out << "cone property holds on " << gamma.size() << " points\n";
    } else {
      auto [p, q] = *res.witness;
      out << "violated: p = point " << p << " " << to_string(gamma[p]) << ", q = point " << q
          << " " << to_string(gamma[q]) << "\n";
      exit_code = 1;
    }
  });

  // lipcheck
  auto* cmd_lip = app.add_subcommand("lipcheck", "intrinsic Lipschitz cone condition");
  std::string lip_alg, sigma_path, lip_dir;
  double beta = 0.0;
  cmd_lip->add_option("algebra", lip_alg)->required();
  cmd_lip->add_option("--sigma", sigma_path, "point set file")->required();
  cmd_lip->add_option("--direction", lip_dir, "horizontal coordinates of X")->required();
  cmd_lip->add_option("--beta", beta, "cone aperture")->required();
  cmd_lip->callback([&] {
    AlgebraPtr alg = resolve_algebra(lip_alg);
    std::vector<DblElement> sigma = load_points(alg, sigma_path);
    DblElement x = horizontal_element(alg, parse_double_vec(lip_dir));
    LipschitzResult res = lipschitz_cone_check(alg, sigma, x, beta);
    if (res.holds) {
      out << "lipschitz cone condition holds on " << sigma.size() << " points\n";
    } else {
      const auto& w = *res.witness;
      out << "violated: points " << w.p << " and " << w.q << " at t = " << w.t << " (distance "
          << w.distance << " < bound " << w.bound << ")\n";
      exit_code = 1;
    }
  });

  // product
  auto* cmd_product = app.add_subcommand("product", "direct product of two algebras");
  std::string prod_a, prod_b, prod_out;
  cmd_product->add_option("algebraA", prod_a)->required();
  cmd_product->add_option("algebraB", prod_b)->required();
  cmd_product->add_option("--out", prod_out, "output algebra file")->required();
  cmd_product->callback([&] {
    AlgebraPtr product = direct_product(resolve_algebra(prod_a), resolve_algebra(prod_b));
    std::ofstream file(prod_out, std::ios::binary);
    if (!file) throw CarnotError("cannot open '" + prod_out + "' for writing");
    file << serialize_algebra(*product);
    print_info(out, product);
    out << "wrote " << prod_out << "\n";
  });

  // quotient
  auto* cmd_quotient = app.add_subcommand("quotient", "quotient by a graded ideal");
  std::string quot_alg, ideal_text, quot_out;
  cmd_quotient->add_option("algebra", quot_alg)->required();
  cmd_quotient->add_option("--ideal", ideal_text, "vectors 'c1,..,cn;c1,..,cn' (rationals)")
      ->required();
  cmd_quotient->add_option("--out", quot_out, "output algebra file")->required();
  cmd_quotient->callback([&] {
    AlgebraPtr alg = resolve_algebra(quot_alg);
    std::vector<RatElement> span;
    for (const auto& vec_text : split(ideal_text, ';')) {
      if (vec_text.empty()) continue;
      std::vector<Rat> coords = parse_rat_vec(vec_text);
      if (static_cast<int>(coords.size()) != alg->dim())
        throw CarnotError("ideal vectors need " + std::to_string(alg->dim()) + " coordinates");
      span.push_back(make_element(alg, std::move(coords)));
    }
    QuotientOutcome q = quotient(alg, span);
    if (!q.accepted) {
      out << "rejected: " << q.reject_reason << "\n";
      if (q.witness) out << "witness: " << to_string(*q.witness) << "\n";
      exit_code = 1;
      return;
    }
    std::ofstream file(quot_out, std::ios::binary);
    if (!file) throw CarnotError("cannot open '" + quot_out + "' for writing");
    file << serialize_algebra(*q.algebra);
    print_info(out, q.algebra);
    out << "wrote " << quot_out << "\n";
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const CarnotError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}

}  // namespace carnotkit
