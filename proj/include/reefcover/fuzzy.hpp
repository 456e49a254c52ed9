#pragma once

#include <string>
#include <vector>

#include "reefcover/labels.hpp"

namespace reefcover::fuzzy {

using labels::FuzzyLabelSet;
using labels::Term;

// Triangular terms with evenly spaced peaks and saturating shoulder end
// terms, forming a Ruspini partition of the universe.
struct LinguisticVariable {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
    std::vector<Term> terms;
    std::vector<double> peaks;  // strictly increasing, peaks.front()==lo, back()==hi

    static LinguisticVariable evenly_spaced(std::string name, double lo, double hi,
                                            std::vector<Term> terms);

    double membership(std::size_t term_index, double x) const;
    int index_of(Term t) const;              // -1 if absent
    double peak_of(Term t) const;            // crisp value for a label
    double clamp(double x) const;
};

// Per-term membership values at x (clamped into the universe).
std::vector<double> fuzzify(const LinguisticVariable& var, double x);

struct RuleTable {
    std::string name;
    std::string row_var;
    std::string col_var;
    std::vector<Term> row_terms;
    std::vector<Term> col_terms;
    std::vector<Term> consequents;  // row-major

    Term consequent(std::size_t row, std::size_t col) const {
        return consequents[row * col_terms.size() + col];
    }
    bool operator==(const RuleTable&) const = default;
};

struct FuzzyInput {
    double m = 0.0;
    double m_dot = 0.0;
    double f = 0.0;
    double f_dot = 0.0;
};

struct ControlPair {
    double delta = 0.0;  // angular steering adjustment, [-50, 50]
    double phi = 0.0;    // normalized gait frequency, [0, 1]
};

// Definition of the whole inference system: four input variables, two output
// variables, two rule tables. Loadable from a small text format (see
// docs/file-formats.md); the built-in default reproduces the published
// rule tables verbatim.
struct FisDefinition {
    std::vector<LinguisticVariable> variables;
    std::vector<RuleTable> tables;

    const LinguisticVariable& variable(const std::string& name) const;
    const RuleTable& table(const std::string& name) const;

    static FisDefinition builtin_default();
    static FisDefinition parse(const std::string& text);
    std::string serialize() const;
};

// Mamdani inference: min activation per rule, max aggregation per output
// term, clipped consequents, exact centroid of the piecewise-linear
// aggregate envelope.
double infer_and_defuzzify(const RuleTable& table, const LinguisticVariable& row_var,
                           const LinguisticVariable& col_var,
                           const LinguisticVariable& out_var, double x_row,
                           double x_col);

class Engine {
public:
    Engine() : Engine(FisDefinition::builtin_default()) {}
    explicit Engine(FisDefinition def);

    FuzzyInput labels_to_crisp(const FuzzyLabelSet& labels) const;

    ControlPair evaluate(const FuzzyLabelSet& labels) const;

    // Crisp-antecedent entry point; out-of-universe inputs are clamped and
    // reported through `clamped`, never rejected.
    ControlPair evaluate_crisp(const FuzzyInput& input, int* clamped = nullptr) const;

    const FisDefinition& definition() const { return def_; }

private:
    FisDefinition def_;
};

}  // namespace reefcover::fuzzy
