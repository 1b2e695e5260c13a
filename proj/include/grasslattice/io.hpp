#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "grasslattice/simkit.hpp"

namespace grasslattice {

inline constexpr const char* kToolVersion = "0.1.0";

/// Round-trippable double formatting (17 significant digits).
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Ordered key=value block stamped as a comment header into every output
/// file. Rerunning a command with the recorded fields reproduces the file
/// byte for byte, so the header carries only reproducibility-relevant state
/// (wall-clock time is logged to stderr, never into files).
struct RunManifest {
    std::vector<std::pair<std::string, std::string>> fields;

    RunManifest() { fields.emplace_back("version", kToolVersion); }

    void set(const std::string& key, const std::string& value) {
        for (auto& f : fields)
            if (f.first == key) {
                f.second = value;
                return;
            }
        fields.emplace_back(key, value);
    }
    void set(const std::string& key, double v) { set(key, fmt17(v)); }
    void set(const std::string& key, std::uint64_t v) { set(key, std::to_string(v)); }
    void set(const std::string& key, int v) { set(key, std::to_string(v)); }

    void write(std::ostream& os) const {
        os << "# grasslattice-run v1\n";
        for (const auto& [k, v] : fields) os << "# " << k << "=" << v << "\n";
    }
};

/// Results table: one row per SNR point under a manifest header.
inline void write_error_stats_csv(std::ostream& os, const RunManifest& manifest,
                                  const std::vector<ErrorStats>& rows) {
    manifest.write(os);
    os << "snr_db,ebn0_db,blocks,symbol_errors,bit_errors,ser,ber\n";
    for (const auto& r : rows) {
        os << fmt17(r.snr_db) << ',' << fmt17(r.ebn0_db) << ',' << r.blocks << ','
           << r.symbol_errors << ',' << r.bit_errors << ',' << fmt17(r.ser) << ','
           << fmt17(r.ber) << '\n';
    }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string tok;
    std::istringstream ss(line);
    while (std::getline(ss, tok, ',')) {
        // trim surrounding whitespace
        const auto b = tok.find_first_not_of(" \t\r");
        const auto e = tok.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string{} : tok.substr(b, e - b + 1));
    }
    return out;
}

inline double parse_double(const std::string& s, const char* what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(what) + ": bad number '" + s + "'");
    }
    if (pos != s.size())
        throw std::invalid_argument(std::string(what) + ": bad number '" + s + "'");
    return v;
}

}  // namespace detail

/// Codebook file: header `# grasscodebook v1 T=<T> K=<K>`, then one codeword
/// per row with 2T columns (re, im interleaved) and an optional trailing
/// label column of 0/1 characters.
inline void save_codebook(std::ostream& os, const Codebook& cb) {
    cb.validate();
    const int t = cb.block_length();
    os << "# grasscodebook v1 T=" << t << " K=" << cb.entries.size() << "\n";
    for (std::size_t k = 0; k < cb.entries.size(); ++k) {
        const auto& e = cb.entries[k];
        for (int i = 0; i < t; ++i) {
            if (i) os << ',';
            os << fmt17(e[i].real()) << ',' << fmt17(e[i].imag());
        }
        if (cb.has_labels()) os << ',' << bitword_to_string(cb.labels[k]);
        os << '\n';
    }
}

/// Parses and validates a codebook file. Entries must be unit norm within
/// 1e-6 (they are renormalized on load); duplicate subspaces are rejected.
/// A power-of-two codebook without labels gets natural binary index labels so
/// BER stays computable; otherwise BER is unavailable.
inline Codebook load_codebook(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("load_codebook: empty file");
    int t = 0;
    std::size_t k_declared = 0;
    {
        std::istringstream hs(line);
        std::string hash, magic, v1, tok;
        hs >> hash >> magic >> v1;
        if (hash != "#" || magic != "grasscodebook" || v1 != "v1")
            throw std::invalid_argument("load_codebook: missing '# grasscodebook v1' header");
        while (hs >> tok) {
            if (tok.rfind("T=", 0) == 0) t = std::stoi(tok.substr(2));
            if (tok.rfind("K=", 0) == 0) k_declared = std::stoul(tok.substr(2));
        }
        if (t < 2) throw std::invalid_argument("load_codebook: header must declare T>=2");
    }

    Codebook cb;
    bool first_row = true;
    bool labeled = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto tok = detail::split_csv_line(line);
        const std::size_t need = static_cast<std::size_t>(2 * t);
        if (tok.size() != need && tok.size() != need + 1)
            throw std::invalid_argument("load_codebook: row must have 2T or 2T+1 columns");
        if (first_row) {
            labeled = tok.size() == need + 1;
            first_row = false;
        } else if (labeled != (tok.size() == need + 1)) {
            throw std::invalid_argument("load_codebook: labels must be all-or-none");
        }
        Eigen::VectorXcd e(t);
        for (int i = 0; i < t; ++i)
            e[i] = std::complex<double>(detail::parse_double(tok[2 * i], "load_codebook"),
                                        detail::parse_double(tok[2 * i + 1], "load_codebook"));
        const double n = e.norm();
        if (std::abs(n - 1.0) > 1e-6)
            throw std::invalid_argument("load_codebook: entry is not unit norm within 1e-6");
        cb.entries.push_back(e / n);
        if (labeled) cb.labels.push_back(bitword_from_string(tok[need]));
    }
    if (cb.entries.empty()) throw std::invalid_argument("load_codebook: no codewords");
    if (k_declared != 0 && k_declared != cb.entries.size())
        throw std::invalid_argument("load_codebook: header K does not match row count");
    for (std::size_t i = 0; i < cb.entries.size(); ++i)
        for (std::size_t j = i + 1; j < cb.entries.size(); ++j)
            if (chordal_distance(cb.entries[i], cb.entries[j]) < 1e-12)
                throw std::invalid_argument("load_codebook: duplicate codeword");

    if (!cb.has_labels()) {
        const std::size_t k_total = cb.entries.size();
        if ((k_total & (k_total - 1)) == 0 && k_total > 1) {
            int bits = 0;
            while ((std::size_t{1} << bits) < k_total) ++bits;
            for (std::size_t i = 0; i < k_total; ++i) {
                BitWord word(bits);
                for (int b = 0; b < bits; ++b) word[b] = (i >> (bits - 1 - b)) & 1u;
                cb.labels.push_back(std::move(word));
            }
        }
    }
    cb.validate();
    return cb;
}

inline Codebook load_codebook_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("load_codebook: cannot open '" + path + "'");
    return load_codebook(is);
}

/// Cache of swept lattice margins: rows T,B,N,snr_db,alpha. The last match
/// for (T, B, N) wins, so appending refinements is safe.
inline void append_alpha_cache(const std::string& path, int t, int b, int n, double snr_db,
                               double alpha) {
    const bool exists = static_cast<bool>(std::ifstream(path));
    std::ofstream os(path, std::ios::app);
    if (!os) throw std::invalid_argument("append_alpha_cache: cannot open '" + path + "'");
    if (!exists) os << "# grassalpha v1\n# T,B,N,snr_db,alpha\n";
    os << t << ',' << b << ',' << n << ',' << fmt17(snr_db) << ',' << fmt17(alpha) << '\n';
}

inline std::optional<double> lookup_alpha_cache(const std::string& path, int t, int b, int n) {
    std::ifstream is(path);
    if (!is) return std::nullopt;
    std::optional<double> found;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto tok = detail::split_csv_line(line);
        if (tok.size() != 5) continue;
        try {
            if (std::stoi(tok[0]) == t && std::stoi(tok[1]) == b && std::stoi(tok[2]) == n)
                found = detail::parse_double(tok[4], "lookup_alpha_cache");
        } catch (const std::exception&) {
            continue;
        }
    }
    return found;
}

}  // namespace grasslattice
