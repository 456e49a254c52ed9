#include "reefcover/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace reefcover::fuzzy {

LinguisticVariable LinguisticVariable::evenly_spaced(std::string name, double lo,
                                                     double hi,
                                                     std::vector<Term> terms) {
    if (!(lo < hi)) throw std::invalid_argument("universe must satisfy lo < hi");
    if (terms.size() < 2) throw std::invalid_argument("need at least two terms");
    LinguisticVariable var;
    var.name = std::move(name);
    var.lo = lo;
    var.hi = hi;
    var.terms = std::move(terms);
    const std::size_t n = var.terms.size();
    var.peaks.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        var.peaks[k] = lo + (hi - lo) * static_cast<double>(k) / (n - 1);
    var.peaks.front() = lo;
    var.peaks.back() = hi;
    return var;
}

double LinguisticVariable::membership(std::size_t k, double x) const {
    const std::size_t last = peaks.size() - 1;
    const double p = peaks[k];
    if (k == 0) {
        if (x <= p) return 1.0;  // left shoulder
        const double next = peaks[1];
        return x < next ? (next - x) / (next - p) : 0.0;
    }
    if (k == last) {
        if (x >= p) return 1.0;  // right shoulder
        const double prev = peaks[last - 1];
        return x > prev ? (x - prev) / (p - prev) : 0.0;
    }
    const double a = peaks[k - 1];
    const double b = peaks[k + 1];
    if (x <= a || x >= b) return 0.0;
    return x <= p ? (x - a) / (p - a) : (b - x) / (b - p);
}

int LinguisticVariable::index_of(Term t) const {
    for (std::size_t k = 0; k < terms.size(); ++k)
        if (terms[k] == t) return static_cast<int>(k);
    return -1;
}

double LinguisticVariable::peak_of(Term t) const {
    const int k = index_of(t);
    if (k < 0)
        throw std::invalid_argument("term " + std::string(labels::to_string(t)) +
                                    " not defined for variable " + name);
    return peaks[static_cast<std::size_t>(k)];
}

double LinguisticVariable::clamp(double x) const { return std::clamp(x, lo, hi); }

std::vector<double> fuzzify(const LinguisticVariable& var, double x) {
    x = var.clamp(x);
    std::vector<double> mu(var.terms.size());
    for (std::size_t k = 0; k < mu.size(); ++k) mu[k] = var.membership(k, x);
    return mu;
}

namespace {

struct LinearPiece {
    double x0, x1;  // domain
    double y0, y1;  // values at x0, x1

    double slope() const { return x1 > x0 ? (y1 - y0) / (x1 - x0) : 0.0; }
    double at(double x) const { return y0 + slope() * (x - x0); }
};

// Linear pieces of one consequent term clipped at level c.
void clipped_term_pieces(const LinguisticVariable& var, std::size_t k, double c,
                         std::vector<LinearPiece>& out) {
    c = std::min(c, 1.0);
    if (c <= 0.0) return;
    const std::size_t last = var.peaks.size() - 1;
    const double p = var.peaks[k];
    if (k == 0) {
        const double next = var.peaks[1];
        const double xc = next - c * (next - p);  // where the falling edge hits c
        if (xc > var.lo) out.push_back({var.lo, xc, c, c});
        if (next > xc) out.push_back({xc, next, c, 0.0});
        return;
    }
    if (k == last) {
        const double prev = var.peaks[last - 1];
        const double xc = prev + c * (p - prev);
        if (xc > prev) out.push_back({prev, xc, 0.0, c});
        if (var.hi > xc) out.push_back({xc, var.hi, c, c});
        return;
    }
    const double a = var.peaks[k - 1];
    const double b = var.peaks[k + 1];
    const double xr = a + c * (p - a);  // rising edge reaches c
    const double xf = b - c * (b - p);  // falling edge leaves c
    if (xr > a) out.push_back({a, xr, 0.0, c});
    if (xf > xr) out.push_back({xr, xf, c, c});
    if (b > xf) out.push_back({xf, b, c, 0.0});
}

double envelope_at(const std::vector<LinearPiece>& pieces, double x) {
    double v = 0.0;
    for (const LinearPiece& piece : pieces)
        if (piece.x0 - 1e-12 <= x && x <= piece.x1 + 1e-12)
            v = std::max(v, piece.at(x));
    return v;
}

}  // namespace

// The aggregated output membership is piecewise linear, so both centroid
// integrals are computed in closed form over its breakpoints. Breakpoints are
// the piece endpoints plus every pairwise crossing, which makes the envelope
// a single linear function on each subinterval.
double infer_and_defuzzify(const RuleTable& table, const LinguisticVariable& row_var,
                           const LinguisticVariable& col_var,
                           const LinguisticVariable& out_var, double x_row,
                           double x_col) {
    const std::vector<double> mu_row = fuzzify(row_var, x_row);
    const std::vector<double> mu_col = fuzzify(col_var, x_col);

    std::vector<double> clip(out_var.terms.size(), 0.0);
    for (std::size_t i = 0; i < table.row_terms.size(); ++i) {
        if (mu_row[i] <= 0.0) continue;
        for (std::size_t j = 0; j < table.col_terms.size(); ++j) {
            const double act = std::min(mu_row[i], mu_col[j]);
            if (act <= 0.0) continue;
            const int k = out_var.index_of(table.consequent(i, j));
            if (k < 0) throw std::logic_error("rule consequent not an output term");
            clip[static_cast<std::size_t>(k)] =
                std::max(clip[static_cast<std::size_t>(k)], act);
        }
    }

    std::vector<LinearPiece> pieces;
    for (std::size_t k = 0; k < clip.size(); ++k)
        clipped_term_pieces(out_var, k, clip[k], pieces);
    if (pieces.empty())
        throw std::logic_error("empty fuzzy aggregate; rule table is incomplete");

    std::vector<double> cuts = {out_var.lo, out_var.hi};
    for (const LinearPiece& piece : pieces) {
        cuts.push_back(piece.x0);
        cuts.push_back(piece.x1);
    }
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        for (std::size_t j = i + 1; j < pieces.size(); ++j) {
            const double lo = std::max(pieces[i].x0, pieces[j].x0);
            const double hi = std::min(pieces[i].x1, pieces[j].x1);
            if (hi <= lo) continue;
            const double ds = pieces[i].slope() - pieces[j].slope();
            if (std::abs(ds) < 1e-14) continue;
            const double x = (pieces[j].at(0.0) - pieces[i].at(0.0)) / ds;
            if (x > lo && x < hi) cuts.push_back(x);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-13; }),
               cuts.end());

    double area = 0.0;
    double moment = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k];
        const double b = cuts[k + 1];
        if (b <= a) continue;
        const double fa = envelope_at(pieces, a);
        const double fb = envelope_at(pieces, b);
        const double alpha = (fb - fa) / (b - a);
        const double beta = fa - alpha * a;
        area += 0.5 * (fa + fb) * (b - a);
        moment += alpha * (b * b * b - a * a * a) / 3.0 +
                  beta * (b * b - a * a) / 2.0;
    }
    if (area <= 1e-12)
        throw std::logic_error("zero-area fuzzy aggregate; rule table is incomplete");
    return std::clamp(moment / area, out_var.lo, out_var.hi);
}

namespace {

std::vector<Term> signed_terms() {
    return {Term::NB, Term::NM, Term::ZO, Term::PM, Term::PB};
}
std::vector<Term> force_terms() { return {Term::ZO, Term::PS, Term::PM, Term::PB}; }

RuleTable make_table(std::string name, std::string row_var, std::string col_var,
                     std::vector<Term> rows, std::vector<Term> cols,
                     std::initializer_list<const char*> entries) {
    RuleTable t;
    t.name = std::move(name);
    t.row_var = std::move(row_var);
    t.col_var = std::move(col_var);
    t.row_terms = std::move(rows);
    t.col_terms = std::move(cols);
    for (const char* e : entries) t.consequents.push_back(labels::term_from_string(e));
    if (t.consequents.size() != t.row_terms.size() * t.col_terms.size())
        throw std::logic_error("rule table size mismatch");
    return t;
}

}  // namespace

FisDefinition FisDefinition::builtin_default() {
    FisDefinition def;
    def.variables = {
        LinguisticVariable::evenly_spaced("moment", -0.2, 0.2, signed_terms()),
        LinguisticVariable::evenly_spaced("moment_change", -3.0, 3.0, signed_terms()),
        LinguisticVariable::evenly_spaced("force", 0.0, 1.0, force_terms()),
        LinguisticVariable::evenly_spaced("force_change", -3.0, 3.0, signed_terms()),
        LinguisticVariable::evenly_spaced("delta", -50.0, 50.0, signed_terms()),
        LinguisticVariable::evenly_spaced("phi", 0.0, 1.0, force_terms()),
    };
    def.tables = {
        make_table("delta", "moment", "moment_change", signed_terms(), signed_terms(),
                   {
                       "NB", "NB", "NM", "ZO", "ZO",  // m = NB
                       "NB", "NM", "ZO", "PM", "PB",  // m = NM
                       "NM", "ZO", "ZO", "ZO", "PM",  // m = ZO
                       "ZO", "PM", "ZO", "PM", "PB",  // m = PM
                       "ZO", "PM", "PM", "PB", "PB",  // m = PB
                   }),
        make_table("phi", "force", "force_change", force_terms(), signed_terms(),
                   {
                       "ZO", "ZO", "ZO", "PS", "PM",  // f = ZO
                       "ZO", "ZO", "PS", "PM", "PM",  // f = PS
                       "ZO", "PS", "PM", "PM", "PB",  // f = PM
                       "PS", "PM", "PM", "PB", "PB",  // f = PB
                   }),
    };
    return def;
}

const LinguisticVariable& FisDefinition::variable(const std::string& name) const {
    for (const auto& v : variables)
        if (v.name == name) return v;
    throw std::invalid_argument("unknown fuzzy variable: " + name);
}

const RuleTable& FisDefinition::table(const std::string& name) const {
    for (const auto& t : tables)
        if (t.name == name) return t;
    throw std::invalid_argument("unknown rule table: " + name);
}

FisDefinition FisDefinition::parse(const std::string& text) {
    FisDefinition def;
    std::istringstream in(text);
    std::string line;
    RuleTable* open_table = nullptr;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head == "universe") {
            std::string name, kw;
            double lo, hi;
            if (!(ls >> name >> lo >> hi >> kw) || kw != "terms")
                throw std::invalid_argument("bad universe line: " + line);
            std::vector<Term> terms;
            std::string t;
            while (ls >> t) terms.push_back(labels::term_from_string(t));
            def.variables.push_back(
                LinguisticVariable::evenly_spaced(name, lo, hi, std::move(terms)));
            open_table = nullptr;
        } else if (head == "table") {
            std::string name, kw_rows, row_var, kw_cols, col_var;
            if (!(ls >> name >> kw_rows >> row_var >> kw_cols >> col_var) ||
                kw_rows != "rows" || kw_cols != "cols")
                throw std::invalid_argument("bad table line: " + line);
            RuleTable t;
            t.name = name;
            t.row_var = row_var;
            t.col_var = col_var;
            t.row_terms.clear();
            t.col_terms = def.variable(col_var).terms;
            def.tables.push_back(std::move(t));
            open_table = &def.tables.back();
        } else if (head.size() >= 2 && head.back() == ':') {
            if (!open_table)
                throw std::invalid_argument("rule row outside a table: " + line);
            open_table->row_terms.push_back(
                labels::term_from_string(head.substr(0, head.size() - 1)));
            std::string t;
            std::size_t n = 0;
            while (ls >> t) {
                open_table->consequents.push_back(labels::term_from_string(t));
                ++n;
            }
            if (n != open_table->col_terms.size())
                throw std::invalid_argument("rule row arity mismatch: " + line);
        } else {
            throw std::invalid_argument("unrecognized fuzzy definition line: " + line);
        }
    }
    for (const RuleTable& t : def.tables) {
        if (t.row_terms != def.variable(t.row_var).terms)
            throw std::invalid_argument("table " + t.name +
                                        " rows do not match its row variable");
        def.variable(t.name);  // output universe must exist
    }
    return def;
}

std::string FisDefinition::serialize() const {
    std::ostringstream out;
    for (const auto& v : variables) {
        out << "universe " << v.name << " " << v.lo << " " << v.hi << " terms";
        for (Term t : v.terms) out << " " << labels::to_string(t);
        out << "\n";
    }
    for (const auto& t : tables) {
        out << "\ntable " << t.name << " rows " << t.row_var << " cols " << t.col_var
            << "\n";
        for (std::size_t i = 0; i < t.row_terms.size(); ++i) {
            out << labels::to_string(t.row_terms[i]) << ":";
            for (std::size_t j = 0; j < t.col_terms.size(); ++j)
                out << " " << labels::to_string(t.consequent(i, j));
            out << "\n";
        }
    }
    return out.str();
}

Engine::Engine(FisDefinition def) : def_(std::move(def)) {
    // Referenced variables and full tables are required up front.
    for (const RuleTable& t : def_.tables) {
        def_.variable(t.row_var);
        def_.variable(t.col_var);
        def_.variable(t.name);
        if (t.consequents.size() != t.row_terms.size() * t.col_terms.size())
            throw std::invalid_argument("incomplete rule table: " + t.name);
    }
}

FuzzyInput Engine::labels_to_crisp(const FuzzyLabelSet& labels) const {
    labels.validate();
    FuzzyInput in;
    in.m = def_.variable("moment").peak_of(labels.moment);
    in.m_dot = def_.variable("moment_change").peak_of(labels.moment_change);
    in.f = def_.variable("force").peak_of(labels.force);
    in.f_dot = def_.variable("force_change").peak_of(labels.force_change);
    return in;
}

ControlPair Engine::evaluate(const FuzzyLabelSet& labels) const {
    return evaluate_crisp(labels_to_crisp(labels));
}

ControlPair Engine::evaluate_crisp(const FuzzyInput& input, int* clamped) const {
    const auto& m_var = def_.variable("moment");
    const auto& md_var = def_.variable("moment_change");
    const auto& f_var = def_.variable("force");
    const auto& fd_var = def_.variable("force_change");
    if (clamped) {
        *clamped = 0;
        for (const auto& [var, x] :
             {std::pair{&m_var, input.m}, {&md_var, input.m_dot},
              {&f_var, input.f}, {&fd_var, input.f_dot}})
            if (x < var->lo || x > var->hi) ++*clamped;
    }
    ControlPair out;
    out.delta = infer_and_defuzzify(def_.table("delta"), m_var, md_var,
                                    def_.variable("delta"), input.m, input.m_dot);
    out.phi = infer_and_defuzzify(def_.table("phi"), f_var, fd_var,
                                  def_.variable("phi"), input.f, input.f_dot);
    return out;
}

}  // namespace reefcover::fuzzy
