#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace rowsu {

/// Binary class tag. The positive class is the minority/disease class by
/// convention throughout the library.
enum class Label : std::uint8_t { neg = 0, pos = 1 };

inline const char* label_name(Label l) {
    return l == Label::pos ? "pos" : "neg";
}

/// An ordered gene ranking: genes[k] is the k-th ranked gene index and
/// scores[k] is its score. Rankers built by sorting a score vector order by
/// (score descending, gene index ascending); composite rankers (the set-cover
/// stages) document their own order.
struct RankedGenes {
    std::vector<std::size_t> genes;
    std::vector<double> scores;

    std::vector<std::size_t> top(std::size_t k) const {
        if (k > genes.size()) {
            k = genes.size();
        }
        return std::vector<std::size_t>(genes.begin(), genes.begin() + static_cast<std::ptrdiff_t>(k));
    }
};

/// Sorts gene indices by (score descending, index ascending). +inf sentinels
/// rank above every finite score.
RankedGenes ranked_from_scores(const std::vector<double>& scores);

/// Expression matrix (n samples x p genes) with one binary label per sample.
///
/// Instances are immutable in normal use; the set_* methods exist for
/// builders (CSV ingestion, the synthetic generator). An optional read
/// counter can be attached to detect any access to the matrix, which the
/// evaluation harness uses to prove that test rows are never touched while
/// selecting features or fitting classifiers.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::size_t n_samples, std::size_t n_genes);

    std::size_t n_samples() const { return n_; }
    std::size_t n_genes() const { return p_; }

    double value(std::size_t sample, std::size_t gene) const {
        count_read();
        return values_[sample * p_ + gene];
    }
    void set_value(std::size_t sample, std::size_t gene, double v) {
        values_[sample * p_ + gene] = v;
    }

    Label label(std::size_t sample) const { return labels_[sample]; }
    void set_label(std::size_t sample, Label l) { labels_[sample] = l; }
    const std::vector<Label>& labels() const { return labels_; }

    const std::string& gene_name(std::size_t gene) const { return gene_names_[gene]; }
    const std::vector<std::string>& gene_names() const { return gene_names_; }
    void set_gene_names(std::vector<std::string> names);

    const std::string& sample_id(std::size_t sample) const { return sample_ids_[sample]; }
    void set_sample_ids(std::vector<std::string> ids);

    std::size_t count(Label l) const;
    std::vector<std::size_t> indices_of(Label l) const;

    /// Gathers one gene's values, optionally restricted to one class.
    std::vector<double> gene_values(std::size_t gene) const;
    std::vector<double> gene_values(std::size_t gene, Label l) const;

    /// New dataset keeping the given sample rows, in the given order.
    Dataset subset_samples(const std::vector<std::size_t>& rows) const;

    /// New dataset keeping the given gene columns, in the given order.
    Dataset subset_genes(const std::vector<std::size_t>& genes) const;

    /// Appends a row; used by the balancer.
    void append_sample(const std::vector<double>& row, Label l, std::string id);

    /// Throws if any entry is non-finite or the shapes are inconsistent.
    void validate() const;

    /// Attach/inspect the instrumentation counter. Every value() read bumps
    /// it; a null counter costs one predictable branch.
    void attach_read_counter(std::shared_ptr<std::atomic<std::uint64_t>> counter) {
        read_counter_ = std::move(counter);
    }
    std::uint64_t read_count() const {
        return read_counter_ ? read_counter_->load(std::memory_order_relaxed) : 0;
    }

private:
    void count_read() const {
        if (read_counter_) {
            read_counter_->fetch_add(1, std::memory_order_relaxed);
        }
    }

    std::size_t n_ = 0;
    std::size_t p_ = 0;
    std::vector<double> values_;
    std::vector<Label> labels_;
    std::vector<std::string> gene_names_;
    std::vector<std::string> sample_ids_;
    std::shared_ptr<std::atomic<std::uint64_t>> read_counter_;
};

/// Dense row-major matrix used for the reduced (selected-genes-only) views
/// handed to classifiers and the SVM solver.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    const double* row(std::size_t r) const { return data.data() + r * cols; }
};

/// Copies the listed gene columns out of a dataset. This is the only path by
/// which classifiers see expression values, so a classifier can never read an
/// unselected column.
Matrix reduced_matrix(const Dataset& d, const std::vector<std::size_t>& genes);

} // namespace rowsu
