#include "cefs/eval.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>

#include "cefs/error.hpp"

namespace cefs {

const char* to_string(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::gaussian_pooled: return "nb-pooled";
        case ClassifierKind::gaussian_diagonal: return "nb-diag";
        case ClassifierKind::knn: return "knn";
    }
    return "nb-diag";
}

ClassifierKind parse_classifier(const std::string& name) {
    for (auto k : {ClassifierKind::gaussian_pooled, ClassifierKind::gaussian_diagonal,
                   ClassifierKind::knn})
        if (name == to_string(k)) return k;
    throw InvalidArgument("unknown classifier '" + name + "'; valid: nb-pooled, nb-diag, knn");
}

namespace {

constexpr double variance_floor = 1e-9;
// Smallest admissible eigenvalue of the pooled correlation matrix.
constexpr double correlation_rank_tolerance = 1e-10;

struct Design {
    Eigen::MatrixXd x;  // rows = samples
    std::vector<std::size_t> cls;
    std::vector<double> classes;
};

Eigen::MatrixXd gather(const Dataset& d, const std::vector<std::size_t>& cols) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(d.n()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto& v = d.feature(cols[c]).values;
        for (std::size_t i = 0; i < d.n(); ++i)
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = v[i];
    }
    return x;
}

Design training_design(const Dataset& train, const std::vector<std::size_t>& cols) {
    Design out;
    out.x = gather(train, cols);
    const auto& y = train.label().values;
    out.classes.assign(y.begin(), y.end());
    std::sort(out.classes.begin(), out.classes.end());
    out.classes.erase(std::unique(out.classes.begin(), out.classes.end()), out.classes.end());
    if (out.classes.size() < 2) throw InvalidArgument("training split needs at least two classes");
    out.cls.reserve(y.size());
    for (double v : y)
        out.cls.push_back(static_cast<std::size_t>(
            std::lower_bound(out.classes.begin(), out.classes.end(), v) - out.classes.begin()));
    return out;
}

struct ClassMoments {
    Eigen::MatrixXd means;  // classes x features
    std::vector<double> counts;
};

ClassMoments class_means(const Design& d) {
    const auto c = static_cast<Eigen::Index>(d.classes.size());
    ClassMoments out{Eigen::MatrixXd::Zero(c, d.x.cols()), std::vector<double>(d.classes.size(), 0.0)};
    for (Eigen::Index i = 0; i < d.x.rows(); ++i) {
        const auto k = static_cast<Eigen::Index>(d.cls[static_cast<std::size_t>(i)]);
        out.means.row(k) += d.x.row(i);
        out.counts[static_cast<std::size_t>(k)] += 1.0;
    }
    for (Eigen::Index k = 0; k < c; ++k) out.means.row(k) /= out.counts[static_cast<std::size_t>(k)];
    return out;
}

std::size_t argmax_class(const Eigen::VectorXd& scores) {
    std::size_t best = 0;
    for (Eigen::Index k = 1; k < scores.size(); ++k)
        if (scores(k) > scores(static_cast<Eigen::Index>(best))) best = static_cast<std::size_t>(k);
    return best;
}

std::vector<double> predict_pooled(const Design& d, const Eigen::MatrixXd& test) {
    const auto mom = class_means(d);
    const auto p = d.x.cols();
    Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < d.x.rows(); ++i) {
        const Eigen::RowVectorXd dev =
            d.x.row(i) - mom.means.row(static_cast<Eigen::Index>(d.cls[static_cast<std::size_t>(i)]));
        scatter.noalias() += dev.transpose() * dev;
    }
    const double n = static_cast<double>(d.x.rows());
    const double c = static_cast<double>(d.classes.size());
    const double dof = n > c ? n - c : n;
    const Eigen::MatrixXd cov = scatter / dof;

    // Rank check on the correlation scale so feature units do not matter.
    const Eigen::VectorXd diag = cov.diagonal();
    if ((diag.array() <= 0.0).any()) throw SingularCovariance();
    const Eigen::VectorXd inv_sd = diag.array().sqrt().inverse();
    const Eigen::MatrixXd corr = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= correlation_rank_tolerance)
        throw SingularCovariance();
    const Eigen::LDLT<Eigen::MatrixXd> solver(cov);

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(test.rows()));
    Eigen::VectorXd scores(static_cast<Eigen::Index>(d.classes.size()));
    for (Eigen::Index i = 0; i < test.rows(); ++i) {
        for (Eigen::Index k = 0; k < scores.size(); ++k) {
            const Eigen::VectorXd dev = (test.row(i) - mom.means.row(k)).transpose();
            const double prior = mom.counts[static_cast<std::size_t>(k)] / n;
            scores(k) = std::log(prior) - 0.5 * dev.dot(solver.solve(dev));
        }
        out.push_back(d.classes[argmax_class(scores)]);
    }
    return out;
}

std::vector<double> predict_diagonal(const Design& d, const Eigen::MatrixXd& test) {
    const auto mom = class_means(d);
    const auto c = static_cast<Eigen::Index>(d.classes.size());
    Eigen::MatrixXd var = Eigen::MatrixXd::Zero(c, d.x.cols());
    for (Eigen::Index i = 0; i < d.x.rows(); ++i) {
        const auto k = static_cast<Eigen::Index>(d.cls[static_cast<std::size_t>(i)]);
        var.row(k).array() += (d.x.row(i) - mom.means.row(k)).array().square();
    }
    for (Eigen::Index k = 0; k < c; ++k) {
        const double nk = mom.counts[static_cast<std::size_t>(k)];
        if (nk > 1.0) var.row(k) /= nk - 1.0;
        else var.row(k).setZero();
    }
    var = var.cwiseMax(variance_floor);
    const Eigen::MatrixXd log_var = var.array().log().matrix();
    const double n = static_cast<double>(d.x.rows());

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(test.rows()));
    Eigen::VectorXd scores(c);
    for (Eigen::Index i = 0; i < test.rows(); ++i) {
        for (Eigen::Index k = 0; k < c; ++k) {
            const double quad =
                ((test.row(i) - mom.means.row(k)).array().square() / var.row(k).array()).sum();
            scores(k) = std::log(mom.counts[static_cast<std::size_t>(k)] / n) -
                        0.5 * (log_var.row(k).sum() + quad);
        }
        out.push_back(d.classes[argmax_class(scores)]);
    }
    return out;
}

std::vector<double> predict_knn(const Design& d, const Eigen::MatrixXd& test, std::size_t k) {
    if (k < 1) throw InvalidArgument("knn needs k >= 1");
    const auto n = d.x.rows();
    const Eigen::RowVectorXd mean = d.x.colwise().mean();
    Eigen::RowVectorXd sd = ((d.x.rowwise() - mean).array().square().colwise().sum() /
                             std::max<double>(static_cast<double>(n) - 1.0, 1.0))
                                .sqrt();
    for (Eigen::Index j = 0; j < sd.size(); ++j)
        if (!(sd(j) > 0.0)) sd(j) = 1.0;
    const Eigen::MatrixXd ztrain = (d.x.rowwise() - mean).array().rowwise() / sd.array();
    const Eigen::MatrixXd ztest = (test.rowwise() - mean).array().rowwise() / sd.array();
    const std::size_t kk = std::min<std::size_t>(k, static_cast<std::size_t>(n));

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(test.rows()));
    std::vector<std::pair<double, std::size_t>> dist(static_cast<std::size_t>(n));
    std::vector<std::size_t> votes(d.classes.size());
    for (Eigen::Index i = 0; i < ztest.rows(); ++i) {
        for (Eigen::Index r = 0; r < n; ++r)
            dist[static_cast<std::size_t>(r)] = {(ztrain.row(r) - ztest.row(i)).squaredNorm(),
                                                 static_cast<std::size_t>(r)};
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());
        std::fill(votes.begin(), votes.end(), 0);
        for (std::size_t q = 0; q < kk; ++q) ++votes[d.cls[dist[q].second]];
        const auto best = std::max_element(votes.begin(), votes.end()) - votes.begin();
        out.push_back(d.classes[static_cast<std::size_t>(best)]);
    }
    return out;
}

}  // namespace

std::vector<double> fit_predict(const ClassifierSpec& spec, const Dataset& train,
                                const Dataset& test, const Mask& mask) {
    if (mask.size() != train.m()) throw LengthMismatch(train.m(), mask.size());
    if (test.m() != train.m()) throw LengthMismatch(train.m(), test.m());
    const auto cols = mask.indices();
    if (cols.empty()) throw InvalidArgument("classifier needs at least one selected feature");
    const auto design = training_design(train, cols);
    const auto x_test = gather(test, cols);
    switch (spec.kind) {
        case ClassifierKind::gaussian_pooled: return predict_pooled(design, x_test);
        case ClassifierKind::gaussian_diagonal: return predict_diagonal(design, x_test);
        case ClassifierKind::knn: return predict_knn(design, x_test, spec.k_neighbors);
    }
    return {};
}

double mce(std::span<const double> predicted, std::span<const double> actual) {
    if (predicted.size() != actual.size()) throw LengthMismatch(actual.size(), predicted.size());
    if (actual.empty()) throw EmptyTestSet();
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < actual.size(); ++i)
        if (predicted[i] != actual[i]) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(actual.size());
}

double delta_ir(const Mask& mask, const DiscretizedDataset& data) {
    return relative_information_gap(score(mask, data), entropy(as_state(data.label())));
}

std::vector<Method> canonical_methods(std::span<const Method> requested) {
    std::vector<Method> out;
    for (auto m : {Method::ce, Method::mim, Method::cmim, Method::mrmr, Method::disr})
        if (std::find(requested.begin(), requested.end(), m) != requested.end()) out.push_back(m);
    return out;
}

std::vector<ClassifierSpec> canonical_classifiers(std::span<const ClassifierSpec> requested) {
    std::vector<ClassifierSpec> out;
    for (auto k : {ClassifierKind::gaussian_pooled, ClassifierKind::gaussian_diagonal,
                   ClassifierKind::knn})
        for (const auto& s : requested)
            if (s.kind == k && std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Prepared {
    Split split;
    Dataset train;  // labels replaced by class values
    Dataset test;
    DiscretizedDataset data;
};

Prepared prepare(const Dataset& d, const SplitSpec& split_spec, const DiscretizeConfig& disc) {
    auto parts = split(d, split_spec);
    const auto discretizer = Discretizer::fit(parts.train, disc);
    auto data = discretizer.transform(parts.train);
    auto train = with_label(parts.train, discretizer.class_labels(parts.train));
    // The test split may be empty; build it without the non-empty check.
    Dataset test = parts.test;
    if (test.n() > 0) test = with_label(parts.test, discretizer.class_labels(parts.test));
    return Prepared{std::move(parts), std::move(train), std::move(test), std::move(data)};
}

std::optional<double> evaluate(const ClassifierSpec& spec, const Prepared& p, const Mask& mask,
                               std::string& note) {
    if (mask.popcount() == 0) {
        note = "empty selection";
        return std::nullopt;
    }
    try {
        const auto predicted = fit_predict(spec, p.train, p.test, mask);
        return mce(predicted, p.test.label().values);
    } catch (const SingularCovariance&) {
        note = "not evaluable";
        return std::nullopt;
    }
}

}  // namespace

BenchmarkReport benchmark(const Dataset& d, const BenchmarkConfig& config) {
    BenchmarkReport report;
    report.dataset = d.name();
    report.seed = config.ce.seed;
    report.feature_names = d.feature_names();
    const auto methods = canonical_methods(config.methods);
    const auto classifiers = canonical_classifiers(config.classifiers);
    if (methods.empty()) return report;

    const auto prepared = prepare(d, config.split, config.discretize);
    report.n_train = prepared.train.n();
    report.n_test = prepared.test.n();
    if (prepared.test.n() == 0 && !classifiers.empty()) throw EmptyTestSet();

    auto start = Clock::now();
    auto ce = run(prepared.data, config.ce);
    const double ce_seconds = seconds_since(start);
    const std::size_t k = std::max<std::size_t>(ce.mask.popcount(), 1);

    for (const auto method : methods) {
        MethodSelection sel;
        sel.method = method;
        Mask mask(d.m());
        if (method == Method::ce) {
            mask = ce.mask;
            sel.selected = mask.indices();
            sel.delta_t = ce_seconds;
        } else {
            start = Clock::now();
            auto ranked = select_baseline(method, prepared.data, k);
            sel.delta_t = seconds_since(start);
            sel.selected = ranked.order;
            sel.criterion_values = std::move(ranked.criterion_values);
            mask = Mask::from_indices(d.m(), sel.selected);
        }
        sel.delta_ir = delta_ir(mask, prepared.data);
        for (const auto& spec : classifiers) {
            MetricRecord rec;
            rec.method = method;
            rec.classifier = spec;
            rec.mce = evaluate(spec, prepared, mask, rec.note);
            rec.delta_ir = sel.delta_ir;
            rec.delta_t = sel.delta_t;
            rec.cardinality = mask.popcount();
            report.records.push_back(std::move(rec));
        }
        report.selections.push_back(std::move(sel));
    }
    report.ce = std::move(ce);
    return report;
}

std::vector<SweepPoint> sweep_cardinality(std::span<const std::size_t> ranking,
                                          const DiscretizedDataset& data, const Dataset& train,
                                          const Dataset& test, std::span<const std::size_t> k_values,
                                          const ClassifierSpec& spec) {
    for (auto k : k_values)
        if (k < 1 || k > ranking.size() || k > data.m()) throw InvalidK(k, std::min(ranking.size(), data.m()));
    const Bits hy = entropy(as_state(data.label()));
    std::vector<SweepPoint> out;
    out.reserve(k_values.size());
    for (auto k : k_values) {
        const auto mask = Mask::from_indices(data.m(), ranking.first(k));
        SweepPoint pt;
        pt.k = k;
        pt.mi = score(mask, data);
        pt.delta_ir = relative_information_gap(pt.mi, hy);
        try {
            pt.mce = mce(fit_predict(spec, train, test, mask), test.label().values);
        } catch (const SingularCovariance&) {
            pt.mce = std::nullopt;
        }
        out.push_back(pt);
    }
    return out;
}

SweepResult sweep(const Dataset& d, const SweepConfig& config) {
    const auto prepared = prepare(d, config.split, config.discretize);
    if (prepared.test.n() == 0) throw EmptyTestSet();
    SweepResult out;
    const std::size_t m = d.m();
    for (auto k : config.k_values)
        if (k < 1 || k > m) throw InvalidK(k, m);
    if (config.method == Method::ce) {
        auto ce = run(prepared.data, config.ce);
        out.ranking = top_k_by_probability(ce.final_p, m);
        out.ce = std::move(ce);
    } else {
        std::size_t kmax = 1;
        for (auto k : config.k_values) kmax = std::max(kmax, k);
        out.ranking = select_baseline(config.method, prepared.data, kmax).order;
    }
    out.points = sweep_cardinality(out.ranking, prepared.data, prepared.train, prepared.test,
                                   config.k_values, config.classifier);
    return out;
}

}  // namespace cefs
