#pragma once

// Uniform random benchmark instances, one file per (length, alphabet size,
// index) with a tab-separated manifest.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "lrs/core.hpp"
#include "lrs/rng.hpp"

namespace lrs {

/// Symbols used by generated instances: A-Z then a-f.
inline constexpr std::string_view kRepertoire = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdef";

struct GenSpec {
    std::vector<std::size_t> lengths{100, 200, 300, 500, 1000, 2000, 5000};
    std::vector<std::size_t> alphabet_sizes{2, 4, 8, 16, 32};
    std::size_t count_per_cell = 30;
    std::uint64_t seed = 1;

    void validate() const {
        if (lengths.empty() || alphabet_sizes.empty()) throw InputError("empty length or alphabet list");
        for (auto n : lengths) {
            if (n == 0) throw InputError("lengths must be positive");
        }
        for (auto s : alphabet_sizes) {
            if (s == 0 || s > kRepertoire.size()) {
                throw InputError("alphabet size must lie in 1.." + std::to_string(kRepertoire.size()));
            }
        }
        if (count_per_cell == 0) throw InputError("count_per_cell must be positive");
    }
};

struct GeneratedInstance {
    std::string file;  // file name relative to the output directory
    std::size_t n = 0;
    std::size_t sigma = 0;
    std::size_t index = 0;  // 1-based within its cell
    std::uint64_t seed = 0;
};

inline std::string instance_file_name(std::size_t n, std::size_t sigma, std::size_t index) {
    return "lrs_n" + std::to_string(n) + "_s" + std::to_string(sigma) + "_" + std::to_string(index) + ".txt";
}

/// i.i.d. uniform string over the first `sigma` repertoire symbols. Fully
/// determined by (seed, n, sigma, index).
inline Instance random_instance(std::size_t n, std::size_t sigma, std::uint64_t seed, std::size_t index = 1) {
    if (sigma == 0 || sigma > kRepertoire.size()) {
        throw InputError("alphabet size must lie in 1.." + std::to_string(kRepertoire.size()));
    }
    Rng rng(seed, "instgen", {n, sigma, index});
    std::vector<Symbol> text(n);
    for (auto &s : text) {
        s = static_cast<Symbol>(rng.below(sigma));
    }
    return Instance(Alphabet::from_chars(kRepertoire.substr(0, sigma)), std::move(text));
}

/// Writes every instance of `spec` plus manifest.tsv into `out_dir`.
inline std::vector<GeneratedInstance> generate(const GenSpec &spec, const std::filesystem::path &out_dir) {
    spec.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir)) {
        throw IoError("cannot create output directory '" + out_dir.string() + "'");
    }

    std::vector<GeneratedInstance> written;
    for (auto n : spec.lengths) {
        for (auto sigma : spec.alphabet_sizes) {
            for (std::size_t k = 1; k <= spec.count_per_cell; ++k) {
                GeneratedInstance g{instance_file_name(n, sigma, k), n, sigma, k, spec.seed};
                write_instance((out_dir / g.file).string(), random_instance(n, sigma, spec.seed, k));
                written.push_back(std::move(g));
            }
        }
    }

    std::ofstream manifest(out_dir / "manifest.tsv", std::ios::binary);
    if (!manifest) {
        throw IoError("cannot write manifest in '" + out_dir.string() + "'");
    }
    manifest << "file\tn\tsigma\tindex\tseed\n";
    for (const auto &g : written) {
        manifest << g.file << '\t' << g.n << '\t' << g.sigma << '\t' << g.index << '\t' << g.seed << '\n';
    }
    return written;
}

}  // namespace lrs
