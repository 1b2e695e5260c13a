// grasscli: command-line front end for the Grass-Lattice constellation
// library. Subcommands: encode, decode, simulate, sweep-alpha, min-chordal,
// hopf. All file outputs are deterministic given the recorded manifest.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grasslattice/io.hpp"

namespace gl = grasslattice;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDegenerate = 3;

// thrown for degenerate numeric inputs (exit code 3)
struct DegenerateInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_double_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::string tok;
    std::istringstream ss(s);
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(gl::detail::parse_double(tok, what));
    }
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    return out;
}

Eigen::MatrixXcd read_block_csv(const std::string& path, int t_expected) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open block file '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto tok = gl::detail::split_csv_line(line);
        std::vector<double> vals;
        vals.reserve(tok.size());
        for (const auto& s : tok) vals.push_back(gl::detail::parse_double(s, "block file"));
        if (vals.empty() || vals.size() % 2 != 0)
            throw std::invalid_argument("block file rows need an even number of values");
        if (!rows.empty() && vals.size() != rows.front().size())
            throw std::invalid_argument("block file rows have inconsistent lengths");
        rows.push_back(std::move(vals));
    }
    if (static_cast<int>(rows.size()) != t_expected)
        throw std::invalid_argument("block file must have exactly T rows");
    const int n = static_cast<int>(rows.front().size() / 2);
    Eigen::MatrixXcd y(t_expected, n);
    for (int i = 0; i < t_expected; ++i)
        for (int j = 0; j < n; ++j)
            y(i, j) = std::complex<double>(rows[i][2 * j], rows[i][2 * j + 1]);
    return y;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::invalid_argument("cannot open output file '" + path + "'");
    return os;
}

void log_run_start(std::uint64_t seed) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&tt));
    std::cerr << "run " << buf << " seed=" << seed << "\n";
}

// Flag value > cache file > error. The cache is produced by sweep-alpha.
double resolve_alpha(const std::optional<double>& flag, const std::string& cache_path, int t,
                     int b, int n) {
    if (flag) return *flag;
    if (const auto cached = gl::lookup_alpha_cache(cache_path, t, b, n)) return *cached;
    throw std::invalid_argument(
        "--alpha not given and no cached value for this (T,B,N); pass --alpha or run "
        "sweep-alpha with --update-cache");
}

struct CommonSim {
    int num_rx = 1;
    std::string snr_list = "0,5,10,15,20";
    std::uint64_t min_errors = 100;
    std::uint64_t max_blocks = 10'000'000;
    std::uint64_t seed = 1;
    std::string out;
};

void add_sim_options(CLI::App* cmd, CommonSim& c) {
    cmd->add_option("--N", c.num_rx, "receive antennas")->check(CLI::PositiveNumber);
    cmd->add_option("--snr-list", c.snr_list, "comma-separated SNR points in dB");
    cmd->add_option("--min-errors", c.min_errors, "stop a point after this many symbol errors");
    cmd->add_option("--max-blocks", c.max_blocks, "hard cap on blocks per point");
    cmd->add_option("--seed", c.seed, "simulation seed")->envname("GRASS_SEED");
    cmd->add_option("--out", c.out, "output CSV path")->required();
}

void stats_manifest(gl::RunManifest& m, const CommonSim& c) {
    m.set("N", c.num_rx);
    m.set("snr_list_db", c.snr_list);
    m.set("min_symbol_errors", c.min_errors);
    m.set("max_blocks", c.max_blocks);
    m.set("seed", c.seed);
}

int run_encode(int t, int b, double alpha, const std::string& bits) {
    const gl::CodecConfig cfg{t, b, alpha};
    const Eigen::VectorXcd x = gl::encode(gl::bitword_from_string(bits), cfg);
    std::string row;
    for (int i = 0; i < t; ++i) {
        if (i) row += ',';
        row += gl::fmt17(x[i].real()) + ',' + gl::fmt17(x[i].imag());
    }
    std::cout << row << "\n";
    return 0;
}

int run_decode(int t, int b, double alpha, const std::string& block_path) {
    const gl::CodecConfig cfg{t, b, alpha};
    const Eigen::MatrixXcd y = read_block_csv(block_path, t);
    if (y.norm() == 0.0) throw DegenerateInput("block is identically zero");
    std::cout << gl::bitword_to_string(gl::decode(y, cfg)) << "\n";
    return 0;
}

int run_simulate(const std::string& scheme, int t, int b, std::optional<double> alpha_flag,
                 const std::string& alpha_cache, int qam_order, double power_split,
                 const std::string& codebook_path, const CommonSim& c) {
    const auto snrs = parse_double_list(c.snr_list, "--snr-list");
    const gl::StopRule stop{c.min_errors, c.max_blocks};
    log_run_start(c.seed);

    gl::RunManifest m;
    m.set("scheme", scheme);
    std::vector<gl::ErrorStats> stats;
    if (scheme == "grasslattice") {
        const double alpha = resolve_alpha(alpha_flag, alpha_cache, t, b, c.num_rx);
        const gl::CodecConfig cfg{t, b, alpha};
        cfg.validate();
        m.set("T", t);
        m.set("B", b);
        m.set("alpha", alpha);
        m.set("rate_bps_hz", cfg.rate());
        stats_manifest(m, c);
        stats = gl::run_error_rate(cfg, c.num_rx, snrs, stop, c.seed);
    } else if (scheme == "pilot") {
        const gl::PilotConfig pcfg{t, qam_order, power_split};
        pcfg.validate();
        m.set("T", t);
        m.set("qam_order", qam_order);
        m.set("power_split", power_split);
        m.set("rate_bps_hz", pcfg.rate());
        stats_manifest(m, c);
        stats = gl::pilot_error_rate(pcfg, c.num_rx, snrs, stop, c.seed);
    } else if (scheme == "mlfile") {
        if (codebook_path.empty())
            throw std::invalid_argument("--scheme mlfile requires --codebook");
        const gl::Codebook cb = gl::load_codebook_file(codebook_path);
        m.set("codebook", codebook_path);
        m.set("K", static_cast<std::uint64_t>(cb.entries.size()));
        m.set("T", cb.block_length());
        stats_manifest(m, c);
        stats = gl::run_ml_error_rate(cb, c.num_rx, snrs, stop, c.seed);
    } else {
        throw std::invalid_argument("unknown --scheme '" + scheme + "'");
    }

    auto os = open_output(c.out);
    gl::write_error_stats_csv(os, m, stats);
    std::cerr << "wrote " << c.out << " (" << stats.size() << " points)\n";
    return 0;
}

int run_sweep_alpha(int t, int b, const std::string& alphas, double snr_db, const CommonSim& c,
                    const std::string& update_cache) {
    const auto grid = parse_double_list(alphas, "--alphas");
    const gl::StopRule stop{c.min_errors, c.max_blocks};
    log_run_start(c.seed);
    const auto res = gl::sweep_alpha(gl::CodecConfig{t, b, grid.front()}, grid, snr_db,
                                     c.num_rx, stop, c.seed);

    gl::RunManifest m;
    m.set("scheme", "sweep-alpha");
    m.set("T", t);
    m.set("B", b);
    m.set("snr_db", snr_db);
    stats_manifest(m, c);
    m.set("best_alpha", res.best_alpha);

    auto os = open_output(c.out);
    m.write(os);
    os << "alpha,snr_db,ebn0_db,blocks,symbol_errors,bit_errors,ser,ber\n";
    for (const auto& p : res.points) {
        const auto& r = p.stats;
        os << gl::fmt17(p.alpha) << ',' << gl::fmt17(r.snr_db) << ',' << gl::fmt17(r.ebn0_db)
           << ',' << r.blocks << ',' << r.symbol_errors << ',' << r.bit_errors << ','
           << gl::fmt17(r.ser) << ',' << gl::fmt17(r.ber) << '\n';
    }
    std::cout << "best_alpha=" << gl::fmt17(res.best_alpha) << "\n";
    if (!update_cache.empty())
        gl::append_alpha_cache(update_cache, t, b, c.num_rx, snr_db, res.best_alpha);
    return 0;
}

int run_min_chordal(int t, int b, const std::string& alphas, const std::string& out) {
    const auto grid = parse_double_list(alphas, "--alphas");
    gl::RunManifest m;
    m.set("scheme", "min-chordal");
    m.set("T", t);
    m.set("B", b);
    m.set("chordal_distance", "sqrt(1-|x^H y|^2)");

    auto os = open_output(out);
    m.write(os);
    os << "alpha,min_chordal_distance\n";
    for (double alpha : grid) {
        const gl::CodecConfig cfg{t, b, alpha};
        os << gl::fmt17(alpha) << ',' << gl::fmt17(gl::min_chordal_distance(cfg)) << '\n';
    }
    std::cerr << "wrote " << out << " (" << grid.size() << " grid points)\n";
    return 0;
}

int run_hopf(int t, int b, double alpha, const std::string& out) {
    if (t != 2) throw std::invalid_argument("hopf export requires --T 2");
    const gl::CodecConfig cfg{t, b, alpha};
    cfg.validate();
    const auto pts = gl::lattice_points(cfg);
    const int n_lat = 1 << b;
    const std::uint64_t k_total = cfg.cardinality();

    gl::RunManifest m;
    m.set("scheme", "hopf");
    m.set("T", t);
    m.set("B", b);
    m.set("alpha", alpha);
    m.set("K", k_total);
    m.set("columns", "stage,idx,coords...");

    struct Stage {
        const char* name;
        std::vector<std::vector<double>> rows;
    };
    Stage stages[4] = {{"cube", {}}, {"gauss", {}}, {"ball", {}}, {"sphere", {}}};
    for (std::uint64_t word = 0; word < k_total; ++word) {
        const double a = pts[word % n_lat];
        const double bb = pts[(word / n_lat) % n_lat];
        gl::HypercubePoint p{Eigen::VectorXd::Constant(1, a), Eigen::VectorXd::Constant(1, bb)};
        const Eigen::VectorXcd z = gl::cube_to_gauss(p);
        const Eigen::VectorXcd w = gl::gauss_to_ball(z);
        const Eigen::VectorXcd x = gl::ball_to_sphere(w);
        const Eigen::Vector3d s = gl::hopf_project(x);
        stages[0].rows.push_back({a, bb});
        stages[1].rows.push_back({z[0].real(), z[0].imag()});
        stages[2].rows.push_back({w[0].real(), w[0].imag()});
        stages[3].rows.push_back({s[0], s[1], s[2]});
    }

    auto os = open_output(out);
    m.write(os);
    for (const auto& st : stages) {
        for (std::size_t idx = 0; idx < st.rows.size(); ++idx) {
            os << st.name << ',' << idx;
            for (double v : st.rows[idx]) os << ',' << gl::fmt17(v);
            os << '\n';
        }
    }
    std::cerr << "wrote " << out << " (" << k_total << " points x 4 stages)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grass-Lattice noncoherent constellation toolkit"};
    app.require_subcommand(1);

    // ---- encode ----
    auto* enc = app.add_subcommand("encode", "map a bit word to its codeword (CSV row)");
    int enc_t = 2, enc_b = 1;
    std::optional<double> enc_alpha;
    std::string enc_bits, enc_cache = "alpha_cache.csv";
    enc->add_option("--T", enc_t, "coherence time")->check(CLI::Range(2, 64));
    enc->add_option("--B", enc_b, "bits per real component")->check(CLI::Range(1, 20));
    enc->add_option("--alpha", enc_alpha, "lattice margin in (0, 0.5)");
    enc->add_option("--alpha-cache", enc_cache, "alpha cache file");
    enc->add_option("--bits", enc_bits, "bit word of length 2B(T-1)")->required();
    enc->set_config("--config");

    // ---- decode ----
    auto* dec = app.add_subcommand("decode", "decode a stored T x N block to a bit word");
    int dec_t = 2, dec_b = 1;
    std::optional<double> dec_alpha;
    std::string dec_block, dec_cache = "alpha_cache.csv";
    dec->add_option("--T", dec_t, "coherence time")->check(CLI::Range(2, 64));
    dec->add_option("--B", dec_b, "bits per real component")->check(CLI::Range(1, 20));
    dec->add_option("--alpha", dec_alpha, "lattice margin in (0, 0.5)");
    dec->add_option("--alpha-cache", dec_cache, "alpha cache file");
    dec->add_option("--block", dec_block, "CSV file with T rows of interleaved re,im")
        ->required();
    dec->set_config("--config");

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "Monte Carlo SER/BER over a list of SNRs");
    std::string sim_scheme = "grasslattice";
    int sim_t = 2, sim_b = 1, sim_qam = 16;
    std::optional<double> sim_alpha;
    double sim_split = 0.5;
    std::string sim_codebook, sim_cache = "alpha_cache.csv";
    CommonSim sim_c;
    sim->add_option("--scheme", sim_scheme, "grasslattice | pilot | mlfile")
        ->check(CLI::IsMember({"grasslattice", "pilot", "mlfile"}));
    sim->add_option("--T", sim_t, "coherence time")->check(CLI::Range(2, 64));
    sim->add_option("--B", sim_b, "bits per real component")->check(CLI::Range(1, 20));
    sim->add_option("--alpha", sim_alpha, "lattice margin in (0, 0.5)");
    sim->add_option("--alpha-cache", sim_cache, "alpha cache file");
    sim->add_option("--qam-order", sim_qam, "QAM order for the pilot scheme (power of 4)");
    sim->add_option("--power-split", sim_split, "pilot fraction of the block energy");
    sim->add_option("--codebook", sim_codebook, "codebook CSV for --scheme mlfile");
    add_sim_options(sim, sim_c);
    sim->set_config("--config");

    // ---- sweep-alpha ----
    auto* swp = app.add_subcommand("sweep-alpha", "SER/BER over a grid of lattice margins");
    int swp_t = 2, swp_b = 1;
    std::string swp_alphas = "0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4";
    double swp_snr = 20.0;
    std::string swp_cache;
    CommonSim swp_c;
    swp->add_option("--T", swp_t, "coherence time")->check(CLI::Range(2, 64));
    swp->add_option("--B", swp_b, "bits per real component")->check(CLI::Range(1, 20));
    swp->add_option("--alphas", swp_alphas, "comma-separated alpha grid");
    swp->add_option("--snr", swp_snr, "SNR in dB");
    swp->add_option("--update-cache", swp_cache, "append the winning alpha to this cache file");
    add_sim_options(swp, swp_c);
    swp->set_config("--config");

    // ---- min-chordal ----
    auto* mcd = app.add_subcommand("min-chordal",
                                   "exhaustive minimum chordal distance over an alpha grid");
    int mcd_t = 2, mcd_b = 2;
    std::string mcd_alphas =
        "0.02,0.04,0.06,0.08,0.1,0.12,0.14,0.16,0.18,0.2,0.22,0.24,0.26,0.28,0.3,0.32,0.34,"
        "0.36,0.38,0.4";
    std::string mcd_out;
    mcd->add_option("--T", mcd_t, "coherence time")->check(CLI::Range(2, 64));
    mcd->add_option("--B", mcd_b, "bits per real component")->check(CLI::Range(1, 20));
    mcd->add_option("--alphas", mcd_alphas, "comma-separated alpha grid");
    mcd->add_option("--out", mcd_out, "output CSV path")->required();
    mcd->set_config("--config");

    // ---- hopf ----
    auto* hpf = app.add_subcommand(
        "hopf", "export the T=2 constellation stages (cube, gauss, ball, sphere)");
    int hpf_t = 2, hpf_b = 4;
    std::optional<double> hpf_alpha;
    std::string hpf_out, hpf_cache = "alpha_cache.csv";
    hpf->add_option("--T", hpf_t, "coherence time (must be 2)");
    hpf->add_option("--B", hpf_b, "bits per real component")->check(CLI::Range(1, 10));
    hpf->add_option("--alpha", hpf_alpha, "lattice margin in (0, 0.5)");
    hpf->add_option("--alpha-cache", hpf_cache, "alpha cache file");
    hpf->add_option("--out", hpf_out, "output CSV path")->required();
    hpf->set_config("--config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*enc)
            return run_encode(enc_t, enc_b, resolve_alpha(enc_alpha, enc_cache, enc_t, enc_b, 1),
                              enc_bits);
        if (*dec)
            return run_decode(dec_t, dec_b, resolve_alpha(dec_alpha, dec_cache, dec_t, dec_b, 1),
                              dec_block);
        if (*sim)
            return run_simulate(sim_scheme, sim_t, sim_b, sim_alpha, sim_cache, sim_qam,
                                sim_split, sim_codebook, sim_c);
        if (*swp) return run_sweep_alpha(swp_t, swp_b, swp_alphas, swp_snr, swp_c, swp_cache);
        if (*mcd) return run_min_chordal(mcd_t, mcd_b, mcd_alphas, mcd_out);
        if (*hpf)
            return run_hopf(hpf_t, hpf_b,
                            resolve_alpha(hpf_alpha, hpf_cache, hpf_t, hpf_b, 1), hpf_out);
    } catch (const DegenerateInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
