#pragma once

#include "hiermod/constellation.hpp"
#include "hiermod/thresholds.hpp"

#include <cstdint>
#include <vector>

namespace hiermod {

inline constexpr std::uint64_t kDefaultMiSeed = 0x5eedcafe;
inline constexpr std::size_t kDefaultMiQuality = 4000;
inline constexpr double kDefaultImplementationLossDb = 0.8;
inline constexpr double kMinSnrDb = -10.0;
inline constexpr double kMaxSnrDb = 30.0;

struct MiOptions {
    std::size_t quality = kDefaultMiQuality;  // noise points per symbol
    std::uint64_t seed = kDefaultMiSeed;
};

/// Mutual information (bit/channel use) of the three decoding views of one
/// constellation at one SNR. `he` treats the LE stream as interference, `le`
/// assumes the HE symbol is known, `total` is the whole constellation; the
/// per-sample chain rule gives he + le == total.
struct StreamMi {
    double he = 0.0;
    double le = 0.0;
    double total = 0.0;

    double get(Stream s) const noexcept {
        switch (s) {
        case Stream::he: return he;
        case Stream::le: return le;
        case Stream::single: return total;
        }
        return total;
    }
};

/// MI estimator averaging over a fixed set of complex Gaussian noise points:
/// a rank-1 lattice of `quality` points with a seeded random shift, mapped
/// to CN(0, 1) by the polar Box-Muller transform. Reusing the same points
/// across SNRs and geometries makes the estimate a smooth deterministic
/// function of both, which bisection relies on.
class MiEstimator {
public:
    explicit MiEstimator(MiOptions opts = {});

    StreamMi evaluate(const Constellation& c, double snr_db) const;
    double evaluate(const Constellation& c, Stream s, double snr_db) const;

    std::size_t quality() const noexcept { return noise_.size(); }

private:
    std::vector<cdouble> noise_;  // CN(0, 1)
};

double stream_mutual_information(const Constellation& c, Stream s, double snr_db,
                                 MiOptions opts = {});

/// Smallest SNR (0.01 dB bisection) at which the stream MI reaches
/// bits-per-stream x code_rate. No implementation loss is added.
double estimate_threshold(const Constellation& c, Stream s, CodeRate rate, MiOptions opts = {});
double estimate_threshold(const MiEstimator& mi, const Constellation& c, Stream s, CodeRate rate);

struct SelectOptions {
    double gamma_cap = kDefaultGammaCap;
    std::size_t n_samples = 48;
    MiOptions mi;
};

struct SelectedPair {
    Apsk16Params params;
    double mean_he_threshold_db;
};

/// Point of the sampled solution curve minimising the mean HE threshold over
/// `rates`; ties go to the smaller gamma. Samples whose geometry has
/// coincident symbols (gamma == 1) are skipped.
SelectedPair select_pair(double rho_he, const std::vector<CodeRate>& rates, SelectOptions opts = {});

struct EstimateOptions {
    MiOptions mi;
    double implementation_loss_db = kDefaultImplementationLossDb;
};

/// HE and LE entries of one hierarchical 16-APSK for every code rate, tagged
/// mi-estimated, implementation loss included.
std::vector<ModCod> estimate_hierarchical_entries(double rho_he, const Apsk16Params& geometry,
                                                  const std::vector<CodeRate>& rates,
                                                  EstimateOptions opts = {});

/// Hierarchical entries for each rho, using the adopted geometry for the
/// standard fractions and select_pair otherwise.
ThresholdTable estimate_hierarchical_table(const std::vector<double>& rhos,
                                           const std::vector<CodeRate>& rates,
                                           EstimateOptions opts = {});

} // namespace hiermod
