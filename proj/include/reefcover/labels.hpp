#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace reefcover::labels {

// Linguistic terms shared by the semantic backend and the fuzzy engine.
// Each variable uses an ordered subset: Moment / MomentChange / ForceChange
// use {NB, NM, ZO, PM, PB}; Force uses {ZO, PS, PM, PB}.
enum class Term { NB, NM, ZO, PS, PM, PB };

inline constexpr std::array<Term, 5> kSignedTerms = {Term::NB, Term::NM, Term::ZO,
                                                     Term::PM, Term::PB};
inline constexpr std::array<Term, 4> kForceTerms = {Term::ZO, Term::PS, Term::PM,
                                                    Term::PB};

std::string_view to_string(Term t);
Term term_from_string(std::string_view s);

// Ordinal position within the variable's term list; throws if absent.
int signed_index(Term t);
int force_index(Term t);

struct FuzzyLabelSet {
    Term moment = Term::ZO;
    Term moment_change = Term::ZO;
    Term force = Term::ZO;
    Term force_change = Term::ZO;

    bool operator==(const FuzzyLabelSet&) const = default;

    void validate() const;  // throws std::invalid_argument on out-of-set labels
    std::string to_string() const;  // "ZO,ZO,PM,ZO" (moment,mc,force,fc)
};

FuzzyLabelSet label_set_from_string(std::string_view csv);

}  // namespace reefcover::labels
