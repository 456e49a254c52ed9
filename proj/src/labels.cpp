#include "reefcover/labels.hpp"

namespace reefcover::labels {

std::string_view to_string(Term t) {
    switch (t) {
        case Term::NB: return "NB";
        case Term::NM: return "NM";
        case Term::ZO: return "ZO";
        case Term::PS: return "PS";
        case Term::PM: return "PM";
        case Term::PB: return "PB";
    }
    return "??";
}

Term term_from_string(std::string_view s) {
    if (s == "NB") return Term::NB;
    if (s == "NM") return Term::NM;
    if (s == "ZO") return Term::ZO;
    if (s == "PS") return Term::PS;
    if (s == "PM") return Term::PM;
    if (s == "PB") return Term::PB;
    throw std::invalid_argument("unknown fuzzy term: " + std::string(s));
}

int signed_index(Term t) {
    for (std::size_t k = 0; k < kSignedTerms.size(); ++k)
        if (kSignedTerms[k] == t) return static_cast<int>(k);
    throw std::invalid_argument("term not on the NB..PB scale");
}

int force_index(Term t) {
    for (std::size_t k = 0; k < kForceTerms.size(); ++k)
        if (kForceTerms[k] == t) return static_cast<int>(k);
    throw std::invalid_argument("term not on the ZO..PB force scale");
}

void FuzzyLabelSet::validate() const {
    signed_index(moment);
    signed_index(moment_change);
    force_index(force);
    signed_index(force_change);
}

std::string FuzzyLabelSet::to_string() const {
    std::string out;
    out += labels::to_string(moment);
    out += ',';
    out += labels::to_string(moment_change);
    out += ',';
    out += labels::to_string(force);
    out += ',';
    out += labels::to_string(force_change);
    return out;
}

FuzzyLabelSet label_set_from_string(std::string_view csv) {
    std::array<std::string_view, 4> parts;
    std::size_t start = 0;
    for (int k = 0; k < 4; ++k) {
        const std::size_t comma = csv.find(',', start);
        if (k < 3 && comma == std::string_view::npos)
            throw std::invalid_argument("label set needs 4 comma-separated terms");
        parts[k] = csv.substr(start, comma == std::string_view::npos
                                         ? std::string_view::npos
                                         : comma - start);
        start = comma + 1;
    }
    FuzzyLabelSet set{term_from_string(parts[0]), term_from_string(parts[1]),
                      term_from_string(parts[2]), term_from_string(parts[3])};
    set.validate();
    return set;
}

}  // namespace reefcover::labels
