#include "flowaudit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flowaudit {

ConfusionMatrix ConfusionMatrix::zeros(std::vector<std::string> labels) {
    ConfusionMatrix cm;
    cm.counts.assign(labels.size(), std::vector<size_t>(labels.size(), 0));
    cm.labels = std::move(labels);
    return cm;
}

void ConfusionMatrix::validate() const {
    if (counts.size() != labels.size())
        throw std::invalid_argument("confusion matrix: row count != label count");
    for (const auto& row : counts)
        if (row.size() != labels.size())
            throw std::invalid_argument("confusion matrix is not square");
}

size_t ConfusionMatrix::total() const {
    size_t t = 0;
    for (const auto& row : counts)
        for (size_t v : row)
            t += v;
    return t;
}

size_t ConfusionMatrix::support(size_t i) const {
    size_t s = 0;
    for (size_t v : counts[i])
        s += v;
    return s;
}

size_t ConfusionMatrix::predicted(size_t i) const {
    size_t s = 0;
    for (const auto& row : counts)
        s += row[i];
    return s;
}

ConfusionMatrix ConfusionMatrix::fold_binary(const std::vector<std::string>& positive_labels,
                                             const std::string& positive_name,
                                             const std::string& negative_name) const {
    validate();
    auto is_positive = [&](size_t i) {
        return std::find(positive_labels.begin(), positive_labels.end(), labels[i]) !=
               positive_labels.end();
    };
    ConfusionMatrix out = zeros({positive_name, negative_name});
    for (size_t g = 0; g < labels.size(); ++g)
        for (size_t p = 0; p < labels.size(); ++p)
            out.counts[is_positive(g) ? 0 : 1][is_positive(p) ? 0 : 1] += counts[g][p];
    return out;
}

double harmonic_mean(double a, double b) {
    if (a + b == 0)
        return 0;
    return 2 * a * b / (a + b);
}

std::vector<MetricRow> per_class_metrics(const ConfusionMatrix& cm) {
    cm.validate();
    std::vector<MetricRow> rows;
    rows.reserve(cm.labels.size());
    for (size_t i = 0; i < cm.labels.size(); ++i) {
        MetricRow row;
        row.label = cm.labels[i];
        row.support = cm.support(i);
        size_t tp = cm.true_positives(i);
        size_t pred = cm.predicted(i);
        if (pred > 0)
            row.precision = static_cast<double>(tp) / static_cast<double>(pred);
        if (row.support > 0)
            row.recall = static_cast<double>(tp) / static_cast<double>(row.support);
        if (row.precision && row.recall)
            row.f1 = harmonic_mean(*row.precision, *row.recall);
        rows.push_back(std::move(row));
    }
    return rows;
}

MicroMacro micro(const ConfusionMatrix& cm) {
    cm.validate();
    size_t tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < cm.labels.size(); ++i) {
        tp += cm.true_positives(i);
        fp += cm.predicted(i) - cm.true_positives(i);
        fn += cm.support(i) - cm.true_positives(i);
    }
    MicroMacro m;
    m.precision = tp + fp == 0 ? 0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    m.recall = tp + fn == 0 ? 0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    m.f1 = harmonic_mean(m.precision, m.recall);
    // single-label matrices put every misclassification in both a column and
    // a row, so the three averages must coincide
    if (std::abs(m.precision - m.recall) > 1e-12 || std::abs(m.precision - m.f1) > 1e-12)
        throw std::logic_error("micro identity violated");
    return m;
}

MicroMacro macro(const std::vector<MetricRow>& rows, MacroF1Rule rule, size_t* skipped) {
    if (rows.empty())
        throw std::invalid_argument("macro: no rows");
    double psum = 0, rsum = 0, fsum = 0;
    size_t pn = 0, rn = 0, fn_count = 0, undefined = 0;
    for (const auto& row : rows) {
        if (row.precision) {
            psum += *row.precision;
            ++pn;
        } else {
            ++undefined;
        }
        if (row.recall) {
            rsum += *row.recall;
            ++rn;
        } else {
            ++undefined;
        }
        if (row.f1) {
            fsum += *row.f1;
            ++fn_count;
        }
    }
    if (skipped)
        *skipped = undefined;
    if (pn == 0 || rn == 0)
        throw std::invalid_argument("macro: all entries undefined");
    MicroMacro m;
    m.precision = psum / static_cast<double>(pn);
    m.recall = rsum / static_cast<double>(rn);
    m.f1 = rule == MacroF1Rule::HarmonicOfMeans
               ? harmonic_mean(m.precision, m.recall)
               : (fn_count == 0 ? 0 : fsum / static_cast<double>(fn_count));
    return m;
}

} // namespace flowaudit
