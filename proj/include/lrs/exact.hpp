#pragma once

// Exact baselines: subset enumeration for small instances and an integer
// linear model in LP text format for external solvers.

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <sstream>
#include <string>
#include <vector>

#include "lrs/core.hpp"

namespace lrs {

/// Refusal to enumerate an instance above the configured size cap.
class RefusalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultBruteForceRuns = 20;

/// Enumerates all 2^m subsets. Among optimal solutions the lexicographically
/// smallest sorted index set is returned.
inline RunSolution brute_force(const Instance &instance, std::size_t max_runs = kDefaultBruteForceRuns) {
    const std::size_t m = instance.m();
    if (m > max_runs) {
        throw RefusalError("brute force refused: " + std::to_string(m) + " runs exceed the cap of " +
                           std::to_string(max_runs));
    }
    if (m >= 63) {
        throw RefusalError("brute force refused: too many runs for subset enumeration");
    }
    RunSolution best;
    bool have = false;
    std::vector<RunIndex> selected;
    selected.reserve(m);
    const std::uint64_t subsets = std::uint64_t{1} << m;
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
        selected.clear();
        Objective value = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (mask >> i & 1U) {
                selected.push_back(static_cast<RunIndex>(i + 1));
                value += instance.runs()[i].length;
            }
        }
        if (have && value < best.objective) {
            continue;
        }
        if (have && value == best.objective && !(selected < best.selected)) {
            continue;
        }
        if (!is_valid(selected, instance)) {
            continue;
        }
        best.selected = selected;
        best.objective = value;
        have = true;
    }
    return best;
}

struct LinearTerm {
    RunIndex var = 0;  // 1-based run index; rendered as x<var>
    std::int64_t coef = 0;

    friend bool operator==(const LinearTerm &, const LinearTerm &) = default;
};

/// sum(terms) <= rhs
struct LinearConstraint {
    std::string name;
    std::vector<LinearTerm> terms;
    std::int64_t rhs = 0;

    friend bool operator==(const LinearConstraint &, const LinearConstraint &) = default;
};

/// Binary maximisation model: one variable per run.
struct IlpModel {
    std::size_t num_vars = 0;
    std::vector<LinearTerm> objective;
    std::vector<LinearConstraint> constraints;

    friend bool operator==(const IlpModel &, const IlpModel &) = default;
};

/// For every same-letter pair i < j with at least one differing letter in
/// between:  sum_{i<l<j, c(l) != c(i)} x_l + (j-i) x_i + (j-i) x_j <= 2 (j-i).
inline IlpModel emit_ilp(const Instance &instance) {
    IlpModel model;
    const auto &runs = instance.runs();
    const std::size_t m = runs.size();
    model.num_vars = m;
    for (const auto &r : runs) {
        model.objective.push_back({r.index, r.length});
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            if (runs[i].symbol != runs[j].symbol) {
                continue;
            }
            LinearConstraint row;
            for (std::size_t l = i + 1; l < j; ++l) {
                if (runs[l].symbol != runs[i].symbol) {
                    row.terms.push_back({runs[l].index, 1});
                }
            }
            if (row.terms.empty()) {
                continue;
            }
            const auto span = static_cast<std::int64_t>(j - i);
            row.terms.push_back({runs[i].index, span});
            row.terms.push_back({runs[j].index, span});
            row.rhs = 2 * span;
            row.name = "c" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
            model.constraints.push_back(std::move(row));
        }
    }
    return model;
}

/// Whether a 0/1 assignment (index 0 unused, x[1..m]) satisfies every row.
inline bool satisfies(const IlpModel &model, const std::vector<int> &x) {
    for (const auto &row : model.constraints) {
        std::int64_t lhs = 0;
        for (const auto &t : row.terms) {
            lhs += t.coef * x.at(static_cast<std::size_t>(t.var));
        }
        if (lhs > row.rhs) {
            return false;
        }
    }
    return true;
}

inline std::int64_t model_objective(const IlpModel &model, const std::vector<int> &x) {
    std::int64_t value = 0;
    for (const auto &t : model.objective) {
        value += t.coef * x.at(static_cast<std::size_t>(t.var));
    }
    return value;
}

namespace detail {

inline void write_terms(std::ostringstream &out, const std::vector<LinearTerm> &terms) {
    constexpr std::size_t kTermsPerLine = 12;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        if (k > 0 && k % kTermsPerLine == 0) {
            out << "\n   ";
        }
        out << (k == 0 ? " " : " + ");
        if (terms[k].coef != 1) {
            out << terms[k].coef << ' ';
        }
        out << 'x' << terms[k].var;
    }
}

}  // namespace detail

/// LP text format (Maximize / Subject To / Binary / End), rows in (i, j) order.
inline std::string to_lp(const IlpModel &model) {
    std::ostringstream out;
    out << "\\ Longest run subsequence model\n";
    out << "Maximize\n obj:";
    detail::write_terms(out, model.objective);
    out << "\nSubject To\n";
    for (const auto &row : model.constraints) {
        out << ' ' << row.name << ':';
        detail::write_terms(out, row.terms);
        out << " <= " << row.rhs << '\n';
    }
    out << "Binary\n";
    for (std::size_t v = 1; v <= model.num_vars; ++v) {
        out << " x" << v;
        if (v % 16 == 0 || v == model.num_vars) out << '\n';
    }
    out << "End\n";
    return out.str();
}

/// Reads back the subset of the LP format written by to_lp.
inline IlpModel parse_lp(const std::string &text) {
    std::vector<std::string> tokens;
    {
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line)) {
            auto comment = line.find('\\');
            if (comment != std::string::npos) line.erase(comment);
            std::istringstream in(line);
            std::string tok;
            while (in >> tok) tokens.push_back(tok);
        }
    }

    auto parse_var = [](const std::string &tok) -> RunIndex {
        if (tok.size() < 2 || tok[0] != 'x') throw InputError("LP: bad variable '" + tok + "'");
        return static_cast<RunIndex>(std::stol(tok.substr(1)));
    };
    auto is_number = [](const std::string &tok) {
        return !tok.empty() && (std::isdigit(static_cast<unsigned char>(tok[0])) || tok[0] == '-');
    };

    IlpModel model;
    std::size_t pos = 0;
    auto expect = [&](const std::string &word) {
        if (pos >= tokens.size() || tokens[pos] != word) {
            throw InputError("LP: expected '" + word + "'");
        }
        ++pos;
    };
    // Reads "[coef] xK (+ [coef] xK)*" until a token that is not part of it.
    auto read_terms = [&](std::vector<LinearTerm> &terms) {
        bool first = true;
        while (pos < tokens.size()) {
            if (!first) {
                if (tokens[pos] != "+") break;
                ++pos;
            }
            std::int64_t coef = 1;
            if (pos < tokens.size() && is_number(tokens[pos])) {
                coef = std::stoll(tokens[pos++]);
            }
            if (pos >= tokens.size() || tokens[pos].empty() || tokens[pos][0] != 'x') {
                if (first) break;
                throw InputError("LP: dangling '+'");
            }
            terms.push_back({parse_var(tokens[pos++]), coef});
            first = false;
        }
    };

    expect("Maximize");
    expect("obj:");
    read_terms(model.objective);
    expect("Subject");
    expect("To");
    while (pos < tokens.size() && tokens[pos] != "Binary") {
        LinearConstraint row;
        const auto &label = tokens[pos++];
        if (label.empty() || label.back() != ':') throw InputError("LP: row name expected");
        row.name = label.substr(0, label.size() - 1);
        read_terms(row.terms);
        expect("<=");
        if (pos >= tokens.size()) throw InputError("LP: missing right-hand side");
        row.rhs = std::stoll(tokens[pos++]);
        model.constraints.push_back(std::move(row));
    }
    expect("Binary");
    while (pos < tokens.size() && tokens[pos] != "End") {
        auto v = parse_var(tokens[pos++]);
        if (static_cast<std::size_t>(v) != model.num_vars + 1) {
            throw InputError("LP: binary variables must be x1..xm in order");
        }
        ++model.num_vars;
    }
    expect("End");
    return model;
}

}  // namespace lrs
