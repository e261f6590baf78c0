#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "conewalk/estimators.hpp"
#include "conewalk/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace conewalk;

namespace {

struct CommonOpts {
    std::string config_file;
    double sigma = 1.0;
    double T = 1.0;
    int N = 1024;
    long M = 100;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 1;
    std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_file, "flat JSON config; flags override");
    cmd->add_option("--sigma", o.sigma, "diffusion scale");
    cmd->add_option("--T", o.T, "time horizon");
    cmd->add_option("--N", o.N, "grid cells");
    cmd->add_option("--M", o.M, "sample / case count");
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--threads", o.threads, "worker threads");
    cmd->add_option("--out", o.out_dir, "output directory");
}

// file value wins over the default, flag wins over the file,
// CONEWALK_SEED fills an otherwise unset seed
void resolve_common(CLI::App* cmd, CommonOpts& o) {
    json j;
    if (!o.config_file.empty()) {
        std::ifstream in(o.config_file);
        if (!in) throw Error("cannot open config file: " + o.config_file);
        in >> j;
    }
    auto pick = [&](const char* flag, const char* key, auto& var) {
        if (j.contains(key) && cmd->count(flag) == 0) var = j.at(key).get<std::decay_t<decltype(var)>>();
    };
    pick("--sigma", "sigma", o.sigma);
    pick("--T", "T", o.T);
    pick("--N", "N", o.N);
    pick("--M", "M", o.M);
    pick("--seed", "seed", o.seed);
    pick("--threads", "threads", o.threads);
    pick("--out", "out", o.out_dir);
    o.seed_given = cmd->count("--seed") > 0 || j.contains("seed");
    if (!o.seed_given) {
        if (const char* env = std::getenv("CONEWALK_SEED")) {
            o.seed = std::stoull(env);
            o.seed_given = true;
        }
    }
}

std::uint64_t hash_of(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ostringstream ss;
    for (const auto& [k, v] : kv) ss << k << '=' << v << '\n';
    return config_hash(ss.str());
}

std::string fmt(double x) {
    std::ostringstream ss;
    ss << std::setprecision(17) << x;
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    if (!out) throw Error("cannot write " + p.string());
    out << text;
}

int emit_report(const McReport& rep, std::uint64_t h, const std::string& out_dir,
                const std::string& stem) {
    const std::string text = report_to_json(rep, h);
    std::cout << text;
    if (!out_dir.empty() && out_dir != "-") {
        fs::create_directories(out_dir);
        write_file(fs::path(out_dir) / (stem + ".json"), text);
    }
    return rep.pass ? 0 : 1;
}

int run_sample(CLI::App* cmd, CommonOpts& o, const std::string& geometry,
               double start0, double start1) {
    resolve_common(cmd, o);
    if (o.M <= 0) throw Error("sample: --M must be positive");
    if (geometry != "r1d" && geometry != "r2" && geometry != "cone") {
        throw Error("sample: unknown geometry " + geometry);
    }
    const TimeGrid grid(0.0, o.T, o.N);
    const auto h = hash_of({{"cmd", "sample"},
                            {"geometry", geometry},
                            {"sigma", fmt(o.sigma)},
                            {"T", fmt(o.T)},
                            {"N", std::to_string(o.N)},
                            {"M", std::to_string(o.M)},
                            {"seed", std::to_string(o.seed)},
                            {"start0", fmt(start0)},
                            {"start1", fmt(start1)}});
    fs::create_directories(o.out_dir);
    for (long i = 0; i < o.M; ++i) {
        WienerParams p;
        p.sigma = o.sigma;
        p.seed = o.seed;
        p.stream = static_cast<std::uint64_t>(i);
        p.start0 = start0;
        p.start1 = start1;
        std::ostringstream body;
        if (geometry == "r1d") {
            write_csv(body, sample_free(p, grid));
        } else if (geometry == "r2") {
            write_csv(body, sample_free_2d(p, grid));
        } else {
            write_csv(body, sample_cone_path(p, grid, ConePoint(start0, start1)));
        }
        std::ostringstream name;
        name << "path_" << std::setw(4) << std::setfill('0') << i << ".csv";
        std::ostringstream file;
        file << "# config_hash=" << std::hex << h << std::dec << "\n" << body.str();
        write_file(fs::path(o.out_dir) / name.str(), file.str());
    }
    json manifest{{"sigma", o.sigma}, {"T", o.T},       {"N", o.N},
                  {"seed", o.seed},   {"count", o.M},   {"geometry", geometry},
                  {"start0", start0}, {"start1", start1}};
    std::ostringstream hh;
    hh << std::hex << h;
    manifest["config_hash"] = hh.str();
    write_file(fs::path(o.out_dir) / "manifest.json", manifest.dump(2) + "\n");
    std::cout << "wrote " << o.M << " paths to " << o.out_dir << "\n";
    return 0;
}

std::string strip_hash_comment(std::ifstream& in, std::stringstream& out) {
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') continue;
        out << line << '\n';
    }
    return out.str();
}

int run_decompose(CLI::App* cmd, CommonOpts& o, const std::string& geometry,
                  const std::string& input) {
    resolve_common(cmd, o);
    std::ifstream in(input);
    if (!in) throw Error("cannot open " + input);
    std::stringstream clean;
    strip_hash_comment(in, clean);
    const auto h = hash_of({{"cmd", "decompose"}, {"geometry", geometry}, {"input", input}});
    fs::create_directories(o.out_dir);
    json coords;
    std::ostringstream hh;
    hh << std::hex << h;
    coords["config_hash"] = hh.str();
    Path1D psi;
    Diffeo phi;
    if (geometry == "r1d") {
        DecompR d = decompose_1d(PositivePath(read_path_1d(clean)));
        coords["rho"] = d.rho;
        phi = d.phi;
        psi = Path1D(phi.grid(), std::vector<double>(phi.grid().N + 1, 0.0));
    } else if (geometry == "r2") {
        DecompR2 d = decompose_2d(read_path_2d(clean));
        coords["rho"] = d.rho;
        coords["alpha"] = d.alpha;
        psi = d.psi;
        phi = d.phi;
    } else if (geometry == "cone") {
        DecompCone d = decompose_cone(read_cone_path(clean));
        coords["rho"] = d.rho;
        psi = d.psi;
        phi = d.phi;
    } else {
        throw Error("decompose: unknown geometry " + geometry);
    }
    write_file(fs::path(o.out_dir) / "coords.json", coords.dump(2) + "\n");
    std::ostringstream psi_csv, phi_csv;
    write_csv(psi_csv, psi);
    write_csv(phi_csv, phi);
    write_file(fs::path(o.out_dir) / "psi.csv", psi_csv.str());
    write_file(fs::path(o.out_dir) / "phi.csv", phi_csv.str());
    std::cout << coords.dump(2) << "\n";
    return 0;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stoi(cell));
    if (out.empty()) throw Error("empty grid size list");
    return out;
}

int run_verify(CLI::App* cmd, CommonOpts& o, const std::string& suite, double gamma,
               double diffeo_a, double t_star, const std::string& n_list,
               const std::string& functional) {
    resolve_common(cmd, o);
    const auto h = hash_of({{"cmd", "verify"},
                            {"suite", suite},
                            {"sigma", fmt(o.sigma)},
                            {"T", fmt(o.T)},
                            {"N", std::to_string(o.N)},
                            {"M", std::to_string(o.M)},
                            {"seed", std::to_string(o.seed)},
                            {"gamma", fmt(gamma)},
                            {"threads", std::to_string(o.threads)}});
    WienerParams p;
    p.sigma = o.sigma;
    p.seed = o.seed;
    const TimeGrid grid(0.0, o.T, o.N);

    if (suite == "lorentz") {
        McReport rep = check_lorentz_invariance(p, grid, ConePoint(2.0, 0.0), gamma, o.M,
                                                o.threads);
        return emit_report(rep, h, o.out_dir, "report_lorentz");
    }
    if (suite == "rotation") {
        McReport rep = check_rotation_invariance(p, grid, 2.0, 0.0, gamma, o.M, o.threads);
        return emit_report(rep, h, o.out_dir, "report_rotation");
    }
    if (suite == "quasi-invariance") {
        const Diffeo phi = exponential_diffeo(grid, diffeo_a);
        McReport rep = check_quasi_invariance(phi, functional, p, grid, o.M, o.threads);
        // cross-check of the discrete density ratio against the closed form
        std::vector<double> v(grid.N + 1);
        for (int i = 0; i <= grid.N; ++i) {
            const double t = grid.node(i);
            v[i] = std::sin(2.0 * M_PI * t / o.T) + 0.25 * t;
        }
        Path1D smooth(grid, v);
        const double disc = discrete_log_radon_nikodym(phi, smooth, o.sigma);
        const double analytic = log_radon_nikodym(phi, smooth);
        const double rel = std::abs(std::expm1(disc - analytic));
        rep.metadata["density_ratio_rel_err"] = fmt(rel);
        rep.pass = rep.pass && rel < 0.02;
        return emit_report(rep, h, o.out_dir, "report_quasi_invariance");
    }
    if (suite == "markov") {
        if (t_star <= 0.0) t_star = 0.5 * o.T;
        McReport rep = check_markov_split(functional, t_star, p, grid, o.M, o.threads);
        if (functional == "cos_endpoint" && p.start0 == 0.0) {
            const double oracle = std::exp(-0.5 * o.sigma * o.sigma * o.T);
            const double direct = std::stod(rep.metadata.at("direct"));
            const double se = std::stod(rep.metadata.at("direct_se"));
            rep.metadata["oracle"] = fmt(oracle);
            rep.pass = rep.pass && std::abs(direct - oracle) <= 3.0 * se;
        }
        return emit_report(rep, h, o.out_dir, "report_markov");
    }
    if (suite == "action-identity") {
        McReport rep = check_action_identity(p, ConePoint(2.0, 0.0), o.T,
                                             parse_int_list(n_list),
                                             static_cast<int>(std::min<long>(o.M, 20)),
                                             o.threads);
        return emit_report(rep, h, o.out_dir, "report_action_identity");
    }
    if (suite == "metric-forms") {
        return emit_report(check_metric_forms(o.seed, o.M), h, o.out_dir,
                           "report_metric_forms");
    }
    if (suite == "geodesics") {
        return emit_report(check_geodesics(o.seed, static_cast<int>(std::min<long>(o.M, 20))),
                           h, o.out_dir, "report_geodesics");
    }
    if (suite == "splitting-roundtrip") {
        return emit_report(check_splitting_roundtrip(o.seed, static_cast<int>(o.M)), h,
                           o.out_dir, "report_splitting_roundtrip");
    }
    std::cerr << "unknown suite: " << suite << "\n";
    return 2;
}

int run_geodesic(double ra, double ta, double rb, double tb, const std::string& csv) {
    const CoverPoint a(ra, ta), b(rb, tb);
    const GeodesicResult res = geodesic_distance(a, b);
    const auto h = hash_of({{"cmd", "geodesic"},
                            {"ra", fmt(ra)},
                            {"ta", fmt(ta)},
                            {"rb", fmt(rb)},
                            {"tb", fmt(tb)}});
    std::cout << geodesic_to_json(res, h);
    if (!csv.empty()) {
        std::ostringstream out;
        out << "r,theta,sheet,origin\n";
        for (const auto& v : res.polyline) {
            out << fmt(v.r) << ',' << fmt(v.theta) << ',' << v.sheet << ','
                << (v.is_origin ? 1 : 0) << '\n';
        }
        write_file(csv, out.str());
    }
    return 0;
}

int run_kernel(CLI::App* cmd, CommonOpts& o, const std::string& method, double ra,
               double ta, double rb, double tb, int sheet_delta) {
    resolve_common(cmd, o);
    KernelQuery q;
    q.a = CoverPoint(ra, ta);
    q.b = CoverPoint(rb, tb);
    q.sigma = o.sigma;
    q.T = o.T;
    q.sheet_delta = sheet_delta;
    const auto h = hash_of({{"cmd", "kernel"},
                            {"method", method},
                            {"ra", fmt(ra)},
                            {"ta", fmt(ta)},
                            {"rb", fmt(rb)},
                            {"tb", fmt(tb)},
                            {"sigma", fmt(o.sigma)},
                            {"T", fmt(o.T)},
                            {"N", std::to_string(o.N)},
                            {"M", std::to_string(o.M)},
                            {"seed", std::to_string(o.seed)},
                            {"sheet_delta", std::to_string(sheet_delta)}});
    double mc = 0.0, mc_se = 0.0, pde = 0.0;
    McReport rep;
    if (method == "mc" || method == "both") {
        WindingHistogram hist;
        rep = kernel_mc(q, o.N, o.seed, o.M, o.threads, &hist);
        mc = rep.estimate;
        mc_se = rep.std_error;
        long total = 0;
        std::ostringstream hjson;
        hjson << "{";
        bool first = true;
        for (auto [k, n] : hist.counts) {
            total += n;
            if (!first) hjson << ",";
            first = false;
            hjson << "\"" << k << "\":" << n;
        }
        hjson << "}";
        rep.metadata["winding_histogram"] = hjson.str();
        rep.metadata["winding_sum"] = std::to_string(total);
        // classes partition the accepted ensemble
        rep.pass = rep.pass && total == hist.total;
    } else {
        rep.name = "kernel";
        rep.seed = o.seed;
    }
    if (method == "pde" || method == "both") {
        PdeMeshSpec mesh;
        mesh.theta_min = std::min(ta, tb) - 4.0 * o.sigma * std::sqrt(o.T) - 1.0;
        mesh.theta_max = std::max(ta, tb) + 4.0 * o.sigma * std::sqrt(o.T) + 1.0;
        mesh.r_max = std::max(ra, rb) + 4.0 * o.sigma * std::sqrt(o.T);
        pde = kernel_pde_oracle(q, mesh);
        rep.metadata["pde"] = fmt(pde);
        if (method == "pde") {
            rep.name = "kernel_pde";
            rep.estimate = pde;
        }
    }
    if (method == "both") {
        const double gap = std::abs(mc - pde);
        const double rel = gap / std::max(std::abs(pde), 1e-300);
        rep.metadata["rel_gap"] = fmt(rel);
        rep.pass = rep.pass && (rel < 0.05 || gap <= 3.0 * mc_se);
    }
    if (method != "mc" && method != "pde" && method != "both") {
        std::cerr << "unknown method: " << method << "\n";
        return 2;
    }
    return emit_report(rep, h, o.out_dir, "report_kernel");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"measures and walks on the future cone"};
    app.require_subcommand(1);

    CommonOpts sample_o, decomp_o, verify_o, kernel_o;
    std::string geometry = "cone", input, suite, method = "mc", n_list = "256,512,1024,2048";
    std::string functional = "cos_endpoint", polyline_csv;
    double start0 = 2.0, start1 = 0.0, gamma = 0.5, diffeo_a = 0.5, t_star = 0.0;
    double ra = 1.0, ta = 0.0, rb = 1.0, tb = 0.0;
    int sheet_delta = 0;

    auto* sample = app.add_subcommand("sample", "draw path ensembles");
    add_common(sample, sample_o);
    sample->add_option("--geometry", geometry, "r1d | r2 | cone");
    sample->add_option("--start0", start0, "start coordinate");
    sample->add_option("--start1", start1, "start coordinate (2D/cone)");

    auto* decomp = app.add_subcommand("decompose", "orbit coordinates of a path file");
    add_common(decomp, decomp_o);
    decomp->add_option("--geometry", geometry, "r1d | r2 | cone");
    decomp->add_option("--input", input, "path CSV")->required();

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    add_common(verify, verify_o);
    verify->add_option("suite", suite,
                       "lorentz | rotation | quasi-invariance | markov | action-identity | "
                       "metric-forms | geodesics | splitting-roundtrip")
        ->required();
    verify->add_option("--gamma", gamma, "boost / rotation parameter");
    verify->add_option("--diffeo-a", diffeo_a, "exponential family parameter");
    verify->add_option("--t-star", t_star, "split time (default T/2)");
    verify->add_option("--grid-sizes", n_list, "comma list for refinement studies");
    verify->add_option("--functional", functional, "path functional id");

    auto* geo = app.add_subcommand("geodesic", "closed-form distance on the covering");
    geo->add_option("ra", ra, "first radius")->required();
    geo->add_option("ta", ta, "first lifted angle")->required();
    geo->add_option("rb", rb, "second radius")->required();
    geo->add_option("tb", tb, "second lifted angle")->required();
    geo->add_option("--csv", polyline_csv, "write the polyline as CSV");

    auto* kernel = app.add_subcommand("kernel", "winding-class kernel estimate");
    add_common(kernel, kernel_o);
    kernel->add_option("--method", method, "mc | pde | both");
    kernel->add_option("--ra", ra, "source radius");
    kernel->add_option("--theta-a", ta, "source lifted angle");
    kernel->add_option("--rb", rb, "target radius");
    kernel->add_option("--theta-b", tb, "target lifted angle");
    kernel->add_option("--sheet-delta", sheet_delta, "winding class");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sample->parsed()) return run_sample(sample, sample_o, geometry, start0, start1);
        if (decomp->parsed()) return run_decompose(decomp, decomp_o, geometry, input);
        if (verify->parsed()) {
            return run_verify(verify, verify_o, suite, gamma, diffeo_a, t_star, n_list,
                              functional);
        }
        if (geo->parsed()) {
            if (!(ra > 0.0) || !(rb > 0.0)) {
                std::cerr << "geodesic: radii must be positive\n";
                return 2;
            }
            return run_geodesic(ra, ta, rb, tb, polyline_csv);
        }
        if (kernel->parsed()) {
            return run_kernel(kernel, kernel_o, method, ra, ta, rb, tb, sheet_delta);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
