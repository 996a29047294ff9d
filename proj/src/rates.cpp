#include "hiermod/rates.hpp"

#include "hiermod/error.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace hiermod {

Allocation ts_rate_two(double r1, double r2) {
    if (!(r1 > 0.0) || !(r2 > 0.0)) {
        throw DegenerateError(fmt::format("time sharing needs positive rates (got {}, {})", r1, r2));
    }
    Allocation a;
    a.fractions = {r2 / (r1 + r2), r1 / (r1 + r2)};
    a.per_receiver_rate = r1 * r2 / (r1 + r2);
    return a;
}

Allocation ts_rate_n(std::span<const double> rates, std::span<const double> weights) {
    if (rates.empty()) throw DegenerateError("time sharing needs at least one terminal");
    if (!weights.empty() && weights.size() != rates.size()) {
        throw std::invalid_argument("ts_rate_n: rates and weights differ in length");
    }
    std::vector<std::size_t> zero;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (!(rates[i] > 0.0)) zero.push_back(i);
    }
    if (!zero.empty()) throw DegenerateError("terminal cannot decode any modcod", zero);

    // t_i proportional to w_i / R_i gives every receiver the rate
    // t_i R_i / w_i = (sum_j w_j / R_j)^-1.
    Allocation a;
    a.fractions.resize(rates.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        if (!(w >= 1.0)) throw std::invalid_argument("ts_rate_n: weights must be >= 1");
        a.fractions[i] = w / rates[i];
        sum += a.fractions[i];
    }
    for (auto& t : a.fractions) t /= sum;
    a.per_receiver_rate = 1.0 / sum;
    return a;
}

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }

} // namespace

std::vector<Point2> achievable_hull(std::span<const RatePair> points) {
    std::vector<Point2> pts{{0.0, 0.0}};
    for (const auto& p : points) {
        pts.push_back({p.r1, p.r2});
        pts.push_back({p.r1, 0.0});
        pts.push_back({0.0, p.r2});
    }
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;

    // Andrew's monotone chain, collinear points dropped.
    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

double weighted_rate_point(std::span<const RatePair> points, double w1, double w2) {
    if (!(w1 > 0.0) || !(w2 > 0.0)) throw std::invalid_argument("rate weights must be positive");
    const bool any1 = std::any_of(points.begin(), points.end(), [](const RatePair& p) { return p.r1 > 0.0; });
    const bool any2 = std::any_of(points.begin(), points.end(), [](const RatePair& p) { return p.r2 > 0.0; });
    if (!any1 || !any2) {
        std::vector<std::size_t> who;
        if (!any1) who.push_back(0);
        if (!any2) who.push_back(1);
        throw DegenerateError("no positive rate achievable for one receiver of the pair", who);
    }

    const auto hull = achievable_hull(points);
    const Point2 dir{w1, w2};
    double best = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Point2& a = hull[i];
        const Point2& b = hull[(i + 1) % hull.size()];
        // A vertex on the ray is taken as is.
        if (a.x * w2 == a.y * w1) best = std::max(best, a.x / w1);
        const Point2 e{b.x - a.x, b.y - a.y};
        const double den = cross(dir, e);
        if (den == 0.0) continue;  // edge parallel to the ray
        const double s = cross(a, dir) / den;
        const double t = cross(a, e) / den;
        if (s >= -1e-12 && s <= 1.0 + 1e-12 && t > best) best = t;
    }
    return best;
}

double equal_rate_point(std::span<const RatePair> points) { return weighted_rate_point(points, 1.0, 1.0); }

RateModel::RateModel(const ThresholdTable& table) {
    auto by_threshold = [](std::vector<Entry>& v) {
        std::sort(v.begin(), v.end(), [](const Entry& a, const Entry& b) {
            return a.threshold_db < b.threshold_db;
        });
    };
    for (const auto& e : table.entries()) {
        if (e.stream == Stream::single) {
            single_.push_back({e.threshold_db, e.spectral_efficiency(),
                               e.modulation.str() + " " + e.code_rate.str()});
        }
    }
    by_threshold(single_);
    for (double rho : table.hierarchical_rhos()) {
        Hier h;
        h.name = hierarchical_apsk_id(rho).str();
        for (const auto& e : table.entries()) {
            if (!(e.modulation == hierarchical_apsk_id(rho))) continue;
            auto& dst = e.stream == Stream::he ? h.he : h.le;
            dst.push_back({e.threshold_db, e.spectral_efficiency(), e.code_rate.str()});
        }
        by_threshold(h.he);
        by_threshold(h.le);
        hier_.push_back(std::move(h));
    }
}

const RateModel::Entry* RateModel::best(const std::vector<Entry>& sorted, double snr_db) {
    const Entry* out = nullptr;
    for (const auto& e : sorted) {
        if (e.threshold_db > snr_db) break;
        if (!out || e.rate > out->rate) out = &e;
    }
    return out;
}

double RateModel::best_single(double snr_db) const {
    const auto* e = best(single_, snr_db);
    return e ? e->rate : 0.0;
}

std::vector<RatePair> RateModel::operating_points(double snr1, double snr2) const {
    if (snr1 > snr2) std::swap(snr1, snr2);
    std::vector<RatePair> out;
    const auto* s1 = best(single_, snr1);
    const auto* s2 = best(single_, snr2);
    out.push_back({s1 ? s1->rate : 0.0, 0.0, s1 ? s1->label : "none"});
    out.push_back({0.0, s2 ? s2->rate : 0.0, s2 ? s2->label : "none"});
    for (const auto& h : hier_) {
        const auto* he = best(h.he, snr1);
        const auto* le = best(h.le, snr2);
        if (!he && !le) continue;
        out.push_back({he ? he->rate : 0.0, le ? le->rate : 0.0,
                       fmt::format("{} HE {} / LE {}", h.name, he ? he->label : "-", le ? le->label : "-")});
    }
    return out;
}

std::vector<RatePair> operating_points(double snr1, double snr2, const ThresholdTable& table) {
    return RateModel(table).operating_points(snr1, snr2);
}

PairEvaluation evaluate_pair(double snr1, double snr2, const RateModel& model) {
    PairEvaluation ev;
    ev.snr1_db = std::min(snr1, snr2);
    ev.snr2_db = std::max(snr1, snr2);
    ev.points = model.operating_points(ev.snr1_db, ev.snr2_db);
    const double r1 = model.best_single(ev.snr1_db);
    const double r2 = model.best_single(ev.snr2_db);
    if (r1 <= 0.0 || r2 <= 0.0) {
        std::vector<std::size_t> who;
        if (r1 <= 0.0) who.push_back(0);
        if (r2 <= 0.0) who.push_back(1);
        throw DegenerateError(
            fmt::format("receiver at {} dB decodes no modcod", r1 <= 0.0 ? ev.snr1_db : ev.snr2_db), who);
    }
    ev.hull = achievable_hull(ev.points);
    ev.r_ts = ts_rate_two(r1, r2).per_receiver_rate;
    // The classical endpoints belong to the region, so R_hm >= R_ts; the max
    // only absorbs rounding in the edge intersection.
    ev.r_hm = std::max(equal_rate_point(ev.points), ev.r_ts);
    ev.gain = ev.r_hm / ev.r_ts - 1.0;
    return ev;
}

double pair_gain(double snr1, double snr2, const ThresholdTable& table) {
    return evaluate_pair(snr1, snr2, RateModel(table)).gain;
}

} // namespace hiermod
