#ifndef PLUME_SELECTION_HPP
#define PLUME_SELECTION_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "plume/clustering.hpp"

namespace plume {

/// Degrees-of-freedom convention for the information criterion.
/// PaperMixing charges each source 3 + N parameters (coordinates,
/// strength, and one mixing coefficient per detector); PhysicalOnly
/// charges the 3 physical parameters per source.
enum class DofConvention { PaperMixing, PhysicalOnly };

inline const char* to_string(DofConvention c) {
    return c == DofConvention::PaperMixing ? "paper" : "physical";
}

inline DofConvention dof_convention_from_string(const std::string& s) {
    if (s == "paper") return DofConvention::PaperMixing;
    if (s == "physical") return DofConvention::PhysicalOnly;
    throw std::invalid_argument("unknown dof convention '" + s + "'");
}

/// Akaike information criterion for a candidate with i sources and
/// reconstruction error O over N detectors x T samples, dropping the
/// i-independent terms: 2 p(i) + N_t ln(O / N_t).
inline double aic(int i, double O, int N, int T,
                  DofConvention convention = DofConvention::PaperMixing) {
    if (i < 1) throw std::domain_error("aic: source count must be >= 1");
    const double n_t = static_cast<double>(N) * T;
    if (!(n_t > 0.0)) throw std::domain_error("aic: need a nonempty observation matrix");
    if (!(O > 0.0))
        throw std::domain_error("aic: reconstruction error must be positive (got " +
                                std::to_string(O) + ")");
    const int p = convention == DofConvention::PaperMixing ? i * (3 + N) : 3 * i;
    return 2.0 * p + n_t * std::log(O / n_t);
}

/// Same, but floors non-positive O at machine epsilon. Only for callers
/// that can legitimately reach an exactly-zero reconstruction error
/// (noise-free synthetic data); the floor is reported in the selection
/// artifacts.
inline double aic_with_floor(int i, double O, int N, int T,
                             DofConvention convention = DofConvention::PaperMixing) {
    return aic(i, std::max(O, std::numeric_limits<double>::epsilon()), N, T, convention);
}

/// Everything the selector needs to know about one candidate source count.
struct CandidateModel {
    int source_count = 0;
    double avg_silhouette = 0.0;
    double o_cent = 0.0;
    double aic = 0.0;
    std::vector<SourceTriple> centroids;
    MediumParams medium{0.0, 1e-300, 1e-300};
};

enum class CandidateStatus { Chosen, RejectedSilhouette, RejectedAic };

inline const char* to_string(CandidateStatus s) {
    switch (s) {
        case CandidateStatus::Chosen: return "chosen";
        case CandidateStatus::RejectedSilhouette: return "rejected_silhouette";
        case CandidateStatus::RejectedAic: return "rejected_aic";
    }
    return "?";
}

/// Outcome of the robustness filter + information-criterion selection.
struct SelectionReport {
    std::vector<CandidateModel> candidates;
    std::vector<CandidateStatus> status;
    double silhouette_threshold = 0.7;
    int chosen_index = -1; // into candidates; -1 = no robust model

    bool has_choice() const { return chosen_index >= 0; }
    const CandidateModel& chosen() const {
        if (!has_choice()) throw std::logic_error("no robust model was selected");
        return candidates[chosen_index];
    }
};

/// Discard candidates whose average silhouette is at or below the
/// threshold, then pick the minimum-AIC survivor (ties toward fewer
/// sources). An empty survivor set yields a report with no choice rather
/// than an error.
inline SelectionReport select(const std::vector<CandidateModel>& candidates,
                              double silhouette_threshold = 0.7) {
    if (candidates.empty()) throw std::invalid_argument("select: no candidates");
    SelectionReport rep;
    rep.candidates = candidates;
    rep.silhouette_threshold = silhouette_threshold;
    rep.status.assign(candidates.size(), CandidateStatus::RejectedAic);

    int best = -1;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        if (!(candidates[k].avg_silhouette > silhouette_threshold)) {
            rep.status[k] = CandidateStatus::RejectedSilhouette;
            continue;
        }
        if (best < 0 || candidates[k].aic < candidates[best].aic ||
            (candidates[k].aic == candidates[best].aic &&
             candidates[k].source_count < candidates[best].source_count))
            best = static_cast<int>(k);
    }
    if (best >= 0) {
        rep.chosen_index = best;
        rep.status[best] = CandidateStatus::Chosen;
    }
    return rep;
}

} // namespace plume

#endif
