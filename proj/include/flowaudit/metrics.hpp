#pragma once

#include <optional>
#include <string>
#include <vector>

namespace flowaudit {

// Square count matrix, rows = gold labels, columns = predictions.
struct ConfusionMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<size_t>> counts;

    static ConfusionMatrix zeros(std::vector<std::string> labels);
    void validate() const;
    size_t total() const;
    size_t true_positives(size_t i) const { return counts[i][i]; }
    size_t support(size_t i) const;  // row sum
    size_t predicted(size_t i) const; // column sum

    // Collapse into positive-vs-negative using the given positive classes.
    ConfusionMatrix fold_binary(const std::vector<std::string>& positive_labels,
                                const std::string& positive_name = "positive",
                                const std::string& negative_name = "negative") const;
};

// Zero denominators leave the metric undefined (nullopt), not zero.
struct MetricRow {
    std::string label;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    size_t support = 0;
};

struct MicroMacro {
    double precision = 0;
    double recall = 0;
    double f1 = 0;
};

enum class MacroF1Rule {
    HarmonicOfMeans, // harmonic mean of macro-P and macro-R
    MeanOfF1,        // average of per-class F1
};

std::vector<MetricRow> per_class_metrics(const ConfusionMatrix& cm);

// Single-label micro average; P, R and F1 coincide and this is asserted to
// 1e-12.
MicroMacro micro(const ConfusionMatrix& cm);

// Mean of the defined per-class precisions/recalls; undefined entries are
// skipped (callers may count them via `skipped`).
MicroMacro macro(const std::vector<MetricRow>& rows,
                 MacroF1Rule rule = MacroF1Rule::HarmonicOfMeans, size_t* skipped = nullptr);

double harmonic_mean(double a, double b);

} // namespace flowaudit
