#pragma once

// Problem representation for the longest run subsequence problem: alphabets,
// run decomposition, solution validity and the objective.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>
#include <span>

namespace lrs {

/// Malformed input: unknown symbols, out-of-range indices, bad parameters.
class InputError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// File system failures (unreadable instance, unwritable directory).
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Position of a symbol inside its alphabet.
using Symbol = std::uint32_t;

/// 1-based run index. Signed so that -1 can act as "unset" in letter bounds.
using RunIndex = std::int32_t;

using Objective = std::int64_t;

class Alphabet {
  public:
    Alphabet() = default;

    explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            if (symbols_[i].empty()) {
                throw InputError("alphabet symbols must be non-empty");
            }
            if (!lookup_.emplace(symbols_[i], static_cast<Symbol>(i)).second) {
                throw InputError("duplicate alphabet symbol '" + symbols_[i] + "'");
            }
        }
    }

    /// One symbol per character of `chars`.
    static Alphabet from_chars(std::string_view chars) {
        std::vector<std::string> symbols;
        symbols.reserve(chars.size());
        for (char c : chars) {
            symbols.emplace_back(1, c);
        }
        return Alphabet(std::move(symbols));
    }

    [[nodiscard]] std::size_t size() const noexcept { return symbols_.size(); }
    [[nodiscard]] const std::string &operator[](Symbol s) const { return symbols_.at(s); }
    [[nodiscard]] const std::vector<std::string> &symbols() const noexcept { return symbols_; }

    [[nodiscard]] Symbol index_of(std::string_view token) const {
        auto it = lookup_.find(std::string(token));
        if (it == lookup_.end()) {
            throw InputError("symbol '" + std::string(token) + "' is not in the alphabet");
        }
        return it->second;
    }

    [[nodiscard]] bool contains(std::string_view token) const {
        return lookup_.count(std::string(token)) != 0;
    }

  private:
    std::vector<std::string> symbols_;
    std::unordered_map<std::string, Symbol> lookup_;
};

/// One maximal block of identical symbols.
struct Run {
    RunIndex index = 0;  // 1-based
    Symbol symbol = 0;
    std::int64_t length = 0;

    friend bool operator==(const Run &, const Run &) = default;
};

/// A problem instance: input string, alphabet and its run sequence.
class Instance {
  public:
    Instance() = default;

    Instance(Alphabet alphabet, std::vector<Symbol> text)
        : alphabet_(std::move(alphabet)), text_(std::move(text)) {
        for (std::size_t pos = 0; pos < text_.size();) {
            if (text_[pos] >= alphabet_.size()) {
                throw InputError("symbol id out of alphabet range");
            }
            std::size_t end = pos + 1;
            while (end < text_.size() && text_[end] == text_[pos]) {
                ++end;
            }
            runs_.push_back(Run{static_cast<RunIndex>(runs_.size() + 1), text_[pos],
                                static_cast<std::int64_t>(end - pos)});
            pos = end;
        }
    }

    [[nodiscard]] std::size_t n() const noexcept { return text_.size(); }
    [[nodiscard]] std::size_t m() const noexcept { return runs_.size(); }
    [[nodiscard]] std::size_t sigma() const noexcept { return alphabet_.size(); }

    [[nodiscard]] const Alphabet &alphabet() const noexcept { return alphabet_; }
    [[nodiscard]] const std::vector<Symbol> &text() const noexcept { return text_; }
    [[nodiscard]] const std::vector<Run> &runs() const noexcept { return runs_; }

    /// Run by 1-based index.
    [[nodiscard]] const Run &run(RunIndex index) const {
        if (index < 1 || static_cast<std::size_t>(index) > runs_.size()) {
            throw InputError("run index " + std::to_string(index) + " out of range 1.." +
                             std::to_string(runs_.size()));
        }
        return runs_[static_cast<std::size_t>(index - 1)];
    }

    /// Symbols of the text as tokens, concatenated without separators.
    [[nodiscard]] std::string raw() const {
        std::string out;
        for (Symbol s : text_) {
            out += alphabet_[s];
        }
        return out;
    }

  private:
    Alphabet alphabet_;
    std::vector<Symbol> text_;
    std::vector<Run> runs_;
};

/// Decompose a token sequence into maximal runs.
inline Instance decompose(std::span<const std::string> tokens, Alphabet alphabet) {
    std::vector<Symbol> text;
    text.reserve(tokens.size());
    for (const auto &token : tokens) {
        text.push_back(alphabet.index_of(token));
    }
    return Instance(std::move(alphabet), std::move(text));
}

/// Single-character convenience form: each char of `raw` is one symbol.
inline Instance decompose(std::string_view raw, std::string_view alphabet_chars) {
    auto alphabet = Alphabet::from_chars(alphabet_chars);
    std::vector<Symbol> text;
    text.reserve(raw.size());
    for (char c : raw) {
        text.push_back(alphabet.index_of(std::string_view(&c, 1)));
    }
    return Instance(std::move(alphabet), std::move(text));
}

/// A feasible subset of runs (1-based, ascending) and its total length.
struct RunSolution {
    std::vector<RunIndex> selected;
    Objective objective = 0;

    friend bool operator==(const RunSolution &, const RunSolution &) = default;
};

namespace detail {

inline void check_indices(std::span<const RunIndex> selected, const Instance &instance) {
    for (RunIndex i : selected) {
        if (i < 1 || static_cast<std::size_t>(i) > instance.m()) {
            throw InputError("run index " + std::to_string(i) + " out of range 1.." +
                             std::to_string(instance.m()));
        }
    }
}

}  // namespace detail

inline Objective objective(std::span<const RunIndex> selected, const Instance &instance) {
    detail::check_indices(selected, instance);
    Objective total = 0;
    for (RunIndex i : selected) {
        total += instance.run(i).length;
    }
    return total;
}

/// True iff, read in index order, every symbol of the selection forms a single
/// contiguous block. Duplicated indices are an input error.
inline bool is_valid(std::span<const RunIndex> selected, const Instance &instance) {
    detail::check_indices(selected, instance);
    std::vector<RunIndex> sorted(selected.begin(), selected.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InputError("duplicate run index in selection");
    }
    std::vector<char> closed(instance.sigma(), 0);
    bool have_current = false;
    Symbol current = 0;
    for (RunIndex i : sorted) {
        Symbol s = instance.run(i).symbol;
        if (have_current && s == current) {
            continue;
        }
        if (closed[s]) {
            return false;
        }
        if (have_current) {
            closed[current] = 1;
        }
        current = s;
        have_current = true;
    }
    return true;
}

/// Builds a RunSolution from an arbitrary index set; does not check validity.
inline RunSolution make_solution(std::vector<RunIndex> selected, const Instance &instance) {
    std::sort(selected.begin(), selected.end());
    Objective value = objective(selected, instance);
    return RunSolution{std::move(selected), value};
}

// Instance files
//
//   line 1: "n sigma"
//   line 2: sigma space-separated symbol tokens
//   line 3: n space-separated tokens
//
// A file with exactly one line and no whitespace in it is read as a raw string,
// one symbol per character, with the alphabet inferred in order of first
// appearance.

inline Instance parse_instance(std::string_view content) {
    std::vector<std::string> lines;
    {
        std::istringstream in{std::string(content)};
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            lines.push_back(line);
        }
        while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string::npos) {
            lines.pop_back();
        }
    }

    bool raw_form = lines.size() <= 1 &&
                    (lines.empty() || lines.front().find_first_of(" \t") == std::string::npos);
    if (raw_form) {
        std::string raw = lines.empty() ? std::string() : lines.front();
        std::string alphabet;
        for (char c : raw) {
            if (alphabet.find(c) == std::string::npos) {
                alphabet.push_back(c);
            }
        }
        if (raw.empty()) {
            alphabet.clear();
        }
        return decompose(raw, alphabet);
    }
    if (lines.size() > 3) {
        throw InputError("instance must have 3 lines (header, alphabet, string) or 1 raw line");
    }

    std::istringstream header(lines[0]);
    long long n = -1;
    long long sigma = -1;
    if (!(header >> n >> sigma) || n < 0 || sigma < 0) {
        throw InputError("bad instance header '" + lines[0] + "'");
    }
    std::string extra;
    if (header >> extra) {
        throw InputError("trailing data in instance header");
    }

    auto split = [](const std::string &line) {
        std::vector<std::string> out;
        std::istringstream in(line);
        std::string token;
        while (in >> token) {
            out.push_back(token);
        }
        return out;
    };
    auto symbols = lines.size() >= 2 ? split(lines[1]) : std::vector<std::string>{};
    auto tokens = lines.size() == 3 ? split(lines[2]) : std::vector<std::string>{};
    if (symbols.size() != static_cast<std::size_t>(sigma)) {
        throw InputError("alphabet line declares " + std::to_string(symbols.size()) +
                         " symbols, header says " + std::to_string(sigma));
    }
    if (tokens.size() != static_cast<std::size_t>(n)) {
        throw InputError("string line has " + std::to_string(tokens.size()) +
                         " tokens, header says " + std::to_string(n));
    }
    return decompose(tokens, Alphabet(std::move(symbols)));
}

inline std::string format_instance(const Instance &instance) {
    std::string out = std::to_string(instance.n()) + " " + std::to_string(instance.sigma()) + "\n";
    const auto &symbols = instance.alphabet().symbols();
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (i) out += ' ';
        out += symbols[i];
    }
    out += '\n';
    const auto &text = instance.text();
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (i) out += ' ';
        out += instance.alphabet()[text[i]];
    }
    out += '\n';
    return out;
}

inline Instance read_instance(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read instance file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_instance(buffer.str());
    } catch (const InputError &e) {
        throw InputError(path + ": " + e.what());
    }
}

inline void write_instance(const std::string &path, const Instance &instance) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write instance file '" + path + "'");
    }
    out << format_instance(instance);
    if (!out) {
        throw IoError("write failed for '" + path + "'");
    }
}

}  // namespace lrs
