#pragma once

#include "hiermod/thresholds.hpp"

#include <span>
#include <string>
#include <vector>

namespace hiermod {

/// Rates (bit/symbol) offered to the worse-SNR (r1) and better-SNR (r2)
/// receiver of a pair by one transmission configuration.
struct RatePair {
    double r1 = 0.0;
    double r2 = 0.0;
    std::string source;
};

struct Allocation {
    std::vector<double> fractions;
    double per_receiver_rate = 0.0;
};

/// Equal-rate time sharing between two receivers.
Allocation ts_rate_two(double r1, double r2);

/// Equal per-receiver rate time sharing between terminals. Terminal i serves
/// weights[i] receivers (1 when `weights` is empty) and runs at rates[i].
Allocation ts_rate_n(std::span<const double> rates, std::span<const double> weights = {});

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

/// Vertices (counter-clockwise from the origin) of the convex hull of the
/// points, the origin and their axis projections: the rate region reachable
/// by time sharing between the configurations.
std::vector<Point2> achievable_hull(std::span<const RatePair> points);

/// Largest r with (w1 r, w2 r) inside the achievable region. Throws
/// DegenerateError when one receiver gets no positive rate from any point.
double weighted_rate_point(std::span<const RatePair> points, double w1, double w2);

/// Intersection of the achievable region with the line y = x.
double equal_rate_point(std::span<const RatePair> points);

/// Lookup view of a threshold table sorted for repeated rate queries.
class RateModel {
public:
    explicit RateModel(const ThresholdTable& table);

    double best_single(double snr_db) const;

    /// Candidate operating points of a pair, SNRs in any order: the two
    /// single-receiver points, then one point per hierarchical modulation
    /// where the worse receiver decodes HE and the better one LE.
    std::vector<RatePair> operating_points(double snr1, double snr2) const;

private:
    struct Entry {
        double threshold_db;
        double rate;
        std::string label;
    };
    struct Hier {
        std::string name;
        std::vector<Entry> he;
        std::vector<Entry> le;
    };

    static const Entry* best(const std::vector<Entry>& sorted, double snr_db);

    std::vector<Entry> single_;
    std::vector<Hier> hier_;
};

std::vector<RatePair> operating_points(double snr1, double snr2, const ThresholdTable& table);

struct PairEvaluation {
    double snr1_db = 0.0;  // worse receiver
    double snr2_db = 0.0;
    std::vector<RatePair> points;
    std::vector<Point2> hull;
    double r_ts = 0.0;
    double r_hm = 0.0;
    double gain = 0.0;
};

/// Classical versus hierarchical equal rate for one pair. Throws
/// DegenerateError if either receiver decodes nothing.
PairEvaluation evaluate_pair(double snr1, double snr2, const RateModel& model);

double pair_gain(double snr1, double snr2, const ThresholdTable& table);

} // namespace hiermod
