#include "nemem/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "nemem/constitutive3d.hpp"
#include "nemem/errors.hpp"
#include "nemem/membrane.hpp"
#include "nemem/microstructure.hpp"
#include "nemem/parallel.hpp"
#include "nemem/relaxation_oracle.hpp"
#include "nemem/serialize.hpp"
#include "nemem/verification.hpp"

namespace nemem {

namespace {

struct IOError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_number(const std::string& token, const std::string& where) {
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+') ++first;
  double v = 0.0;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
    throw ParseError("bad number '" + token + "' " + where);
  return v;
}

// Fields of an input given either as a matrix or as invariants.
struct MembraneInput {
  std::string matrix;
  std::optional<double> lamM;
  std::optional<double> delta;

  bool has_matrix() const { return !matrix.empty(); }

  Mat32 to_matrix() const {
    if (has_matrix()) return parse_matrix(matrix, 3, 2);
    const auto [l, d] = invariants();
    if (l == 0.0) return Mat32::Zero();
    return diag_embed(l, d / l);
  }

  std::pair<double, double> invariants() const {
    if (!lamM || !delta) throw ParseError("give either --F or both --lamM and --delta");
    if (!(*lamM >= 0.0) || !(*delta >= 0.0))
      throw ParseError("--lamM and --delta must be >= 0");
    if (*lamM == 0.0 && *delta > 0.0)
      throw OutOfDomain("delta > lamM^2 is not realizable");
    return {*lamM, *delta};
  }
};

void add_membrane_input(CLI::App* cmd, MembraneInput& in) {
  auto* f = cmd->add_option("--F", in.matrix, "3x2 matrix, rows separated by ';' (e.g. \"2 0; 0 1; 0 0\")");
  auto* l = cmd->add_option("--lamM", in.lamM, "largest singular value");
  auto* d = cmd->add_option("--delta", in.delta, "areal stretch |adj2 F|");
  f->excludes(l)->excludes(d);
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IOError("cannot open '" + path + "' for writing");
  file << text;
  file.close();
  if (!file) throw IOError("write to '" + path + "' failed");
}

std::string line(const Json& j) { return j.dump() + "\n"; }

struct Range {
  double min = 0.0, max = 0.0;
  int count = 0;
};

Range parse_range(const std::vector<double>& v, const char* name) {
  Range r;
  r.min = v.at(0);
  r.max = v.at(1);
  if (v.at(2) != std::floor(v.at(2)) || v.at(2) < 2.0)
    throw ParseError(std::string(name) + " count must be an integer >= 2");
  r.count = static_cast<int>(v.at(2));
  if (!(r.min >= 0.0)) throw ParseError(std::string(name) + " min must be >= 0");
  if (!(r.min < r.max)) throw ParseError(std::string(name) + " requires min < max");
  return r;
}

double grid_value(const Range& r, int i) {
  if (i == r.count - 1) return r.max;
  return r.min + (r.max - r.min) * i / (r.count - 1);
}

struct ScanRow {
  double lamM, delta;
  Region region;
  double energy = 0.0;
  bool has_stress = false;
  double s1 = 0.0, s2 = 0.0;
};

ScanRow scan_point(double lam, double delta, const MaterialParams& p) {
  ScanRow row{lam, delta, Region::Invalid};
  if (lam == 0.0 && delta > 0.0) return row;
  row.region = classify(lam, delta, p);
  if (row.region == Region::Invalid) return row;
  row.energy = psi(lam, delta, p);
  if (delta > 0.0 && delta < lam * lam * (1.0 - 1e-12)) {
    const StressState st = stress_mem(diag_embed(lam, delta / lam), p);
    row.has_stress = true;
    row.s1 = st.principal_values[0];
    row.s2 = st.principal_values[1];
  }
  return row;
}

std::string csv_row(const ScanRow& row) {
  std::string s = format_double(row.lamM) + "," + format_double(row.delta) + "," +
                  std::string(to_string(row.region)) + ",";
  if (row.region != Region::Invalid) s += format_double(row.energy);
  s += ",";
  if (row.has_stress) s += format_double(row.s1) + "," + format_double(row.s2);
  else s += ",";
  return s + "\n";
}

Json json_row(const ScanRow& row) {
  Json j;
  j["lamM"] = row.lamM;
  j["delta"] = row.delta;
  j["region"] = std::string(to_string(row.region));
  j["energy"] = row.region == Region::Invalid ? Json(nullptr) : Json(row.energy);
  j["sigma1"] = row.has_stress ? Json(row.s1) : Json(nullptr);
  j["sigma2"] = row.has_stress ? Json(row.s2) : Json(nullptr);
  return j;
}

}  // namespace

Eigen::MatrixXd parse_matrix(const std::string& text, int rows, int cols) {
  const std::vector<std::string> row_text = split(text, ';');
  if (static_cast<int>(row_text.size()) != rows)
    throw ParseError("matrix '" + text + "' has " + std::to_string(row_text.size()) + " rows, expected " +
                     std::to_string(rows));
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    std::istringstream in(row_text[i]);
    std::vector<std::string> tokens;
    for (std::string tok; in >> tok;) tokens.push_back(tok);
    if (static_cast<int>(tokens.size()) != cols)
      throw ParseError("matrix row " + std::to_string(i + 1) + " '" + row_text[i] + "' has " +
                       std::to_string(tokens.size()) + " entries, expected " + std::to_string(cols));
    for (int j = 0; j < cols; ++j)
      M(i, j) = parse_number(tokens[j], "in matrix row " + std::to_string(i + 1));
  }
  return M;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relaxed energy, stress, microstructure and verification for nematic elastomer membranes",
               "nemem"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key=value file; flags on the command line take precedence");

  MaterialParams p;
  p.mu = 1.0;
  p.r = 1.0;
  std::uint64_t seed = 0;
  bool r_given = false;
  app.add_option("--mu", p.mu, "shear modulus (> 0)")->capture_default_str();
  auto* r_opt = app.add_option("--r", p.r, "chain anisotropy (>= 1)")->capture_default_str();
  app.add_option("--kappa", p.kappa, "Frank constant (>= 0)")->capture_default_str();
  app.add_option("--seed", seed, "random seed")->capture_default_str();

  MembraneInput in_energy, in_region, in_stress, in_lam, in_relax;
  bool normalized = false;
  auto* energy = app.add_subcommand("energy", "relaxed energy and region");
  add_membrane_input(energy, in_energy);
  energy->add_flag("--normalized", normalized, "divide energies by mu/2");

  auto* region = app.add_subcommand("region", "region of the (lamM, delta) plane");
  add_membrane_input(region, in_region);

  auto* stress = app.add_subcommand("stress", "Cauchy stress of the relaxed membrane");
  add_membrane_input(stress, in_stress);

  auto* laminate = app.add_subcommand("laminate", "minimizing laminate as a JSON Young measure");
  add_membrane_input(laminate, in_lam);

  OracleConfig cfg;
  auto* relax = app.add_subcommand("relax", "numerical lamination oracle");
  add_membrane_input(relax, in_relax);
  relax->add_option("--depth", cfg.depth, "lamination levels (1..3)")->capture_default_str();
  relax->add_option("--n-azimuth", cfg.n_azimuth)->capture_default_str();
  relax->add_option("--n-polar", cfg.n_polar)->capture_default_str();
  relax->add_option("--n-b", cfg.n_b)->capture_default_str();
  relax->add_option("--n-random", cfg.n_random)->capture_default_str();
  relax->add_option("--t-grid", cfg.t_grid, "magnitudes per sign")->capture_default_str();
  relax->add_option("--refine-iters", cfg.refine_iters)->capture_default_str();

  std::vector<double> lam_range, delta_range;
  std::string format = "csv", out_path;
  auto* scan = app.add_subcommand("scan", "energy and stress over a (lamM, delta) grid");
  scan->add_option("--lamM-range", lam_range, "min max count")->expected(3)->required();
  scan->add_option("--delta-range", delta_range, "min max count")->expected(3)->required();
  scan->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  scan->add_option("--out", out_path, "output file (default: standard output)");

  std::string suite = "all";
  int grid = 200;
  int samples = -1;
  auto* verify = app.add_subcommand("verify", "run verification suites, one JSON line each");
  verify->add_option("--suite", suite)
      ->check(CLI::IsMember({"appendixA", "stress", "envelope", "frame", "all"}))
      ->capture_default_str();
  verify->add_option("--grid", grid, "points per axis for appendixA")->capture_default_str();
  verify->add_option("--samples", samples, "samples per region (default per suite)");
  verify->add_option("--out", out_path, "output file (default: standard output)");

  std::string matrix3, director;
  auto* energy3d = app.add_subcommand("energy3d", "bulk entropic energy of a 3x3 gradient");
  energy3d->add_option("--F", matrix3, "3x3 matrix, rows separated by ';'")->required();
  energy3d->add_option("--n", director, "unit director \"x y z\"");

  try {
    app.parse(argc, argv);
    r_given = r_opt->count() > 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    p.validate();
    const double scale = normalized ? 0.5 * p.mu : 1.0;

    if (*energy) {
      Json j;
      if (in_energy.has_matrix()) {
        const Mat32 F = in_energy.to_matrix();
        const MembraneEval ev = energy_Wmem(F, p);
        j["region"] = std::string(to_string(ev.region));
        j["energy"] = ev.energy / scale;
        j["lamM"] = ev.lamM;
        j["delta"] = ev.delta;
        j["energy_unrelaxed"] = to_json_number(energy_W2D(F, p) / scale);
      } else {
        const auto [l, d] = in_energy.invariants();
        const Region reg = classify(l, d, p);
        if (reg == Region::Invalid) throw OutOfDomain("delta > lamM^2 is not realizable");
        j["region"] = std::string(to_string(reg));
        j["energy"] = psi(l, d, p) / scale;
        j["lamM"] = l;
        j["delta"] = d;
        j["energy_unrelaxed"] = to_json_number(w2d_from_invariants(l, std::min(d, l * l), p) / scale);
      }
      out << line(j);
    } else if (*region) {
      Json j;
      if (in_region.has_matrix()) {
        const SingularData sd = svd32(in_region.to_matrix());
        j["region"] = std::string(to_string(classify(sd.lamM, sd.delta, p)));
      } else {
        const auto [l, d] = in_region.invariants();
        j["region"] = std::string(to_string(classify(l, d, p)));
      }
      out << line(j);
    } else if (*stress) {
      const Mat32 F = in_stress.to_matrix();
      Json j = to_json(stress_mem(F, p));
      j["energy"] = energy_Wmem(F, p).energy;
      out << line(j);
    } else if (*laminate) {
      out << line(to_json(young_measure_for(in_lam.to_matrix(), p)));
    } else if (*relax) {
      cfg.seed = seed;
      out << line(to_json(relax_lamination(in_relax.to_matrix(), p, cfg)));
    } else if (*scan) {
      const Range lr = parse_range(lam_range, "--lamM-range");
      const Range dr = parse_range(delta_range, "--delta-range");
      std::vector<std::vector<ScanRow>> rows(lr.count);
      parallel_for(lr.count, [&](std::size_t i) {
        const double lam = grid_value(lr, static_cast<int>(i));
        for (int j = 0; j < dr.count; ++j) rows[i].push_back(scan_point(lam, grid_value(dr, j), p));
      });
      std::string text;
      if (format == "csv") {
        text = "lamM,delta,region,energy,sigma1,sigma2\n";
        for (const auto& block : rows)
          for (const ScanRow& row : block) text += csv_row(row);
      } else {
        Json arr = Json::array();
        for (const auto& block : rows)
          for (const ScanRow& row : block) arr.push_back(json_row(row));
        text = arr.dump() + "\n";
      }
      write_text(out_path, text, out);
    } else if (*verify) {
      const std::vector<double> rs = r_given ? std::vector<double>{p.r} : std::vector<double>{1.01, 2.0, 8.0, 100.0};
      std::string text;
      bool all_pass = true;
      for (double r : rs) {
        MaterialParams q = p;
        q.r = r;
        std::vector<SuiteReport> reports;
        if (suite == "appendixA" || suite == "all") reports.push_back(verify_appendix_A(q, grid));
        if (suite == "stress" || suite == "all")
          reports.push_back(verify_stress_identities(q, samples > 0 ? samples : 50, seed));
        if (suite == "envelope" || suite == "all")
          reports.push_back(verify_envelope_chain(q, samples > 0 ? samples : 2, seed));
        if (suite == "frame" || suite == "all")
          reports.push_back(verify_frame_and_growth(q, samples > 0 ? samples : 1000, seed));
        for (const SuiteReport& rep : reports) {
          Json j = to_json(rep);
          j["r"] = q.r;
          j["mu"] = q.mu;
          text += line(j);
          all_pass = all_pass && rep.pass;
        }
      }
      write_text(out_path, text, out);
      return all_pass ? kExitOk : kExitFail;
    } else if (*energy3d) {
      const Mat33 F = parse_matrix(matrix3, 3, 3);
      Json j;
      const double w3 = energy_W3D(F, p);
      j["on_shell"] = std::isfinite(w3);
      j["energy_W3D"] = to_json_number(w3 / scale);
      if (!director.empty()) {
        const Eigen::MatrixXd n = parse_matrix(director, 1, 3);
        const DirectorState ds(Vec3(n(0, 0), n(0, 1), n(0, 2)));
        j["energy_We"] = to_json_number(energy_We(F, ds, p) / scale);
      }
      const Vec3 nopt = optimal_director(F);
      j["optimal_director"] = {nopt(0), nopt(1), nopt(2)};
      out << line(j);
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const OutOfDomain& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const RankDeficient& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const IOError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIO;
  }
  return kExitOk;
}

}  // namespace nemem
