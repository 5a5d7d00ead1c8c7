#include "rowsu/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rowsu {

RankedGenes ranked_from_scores(const std::vector<double>& scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) {
            return scores[a] > scores[b];
        }
        return a < b;
    });
    RankedGenes out;
    out.genes = std::move(order);
    out.scores.reserve(scores.size());
    for (std::size_t g : out.genes) {
        out.scores.push_back(scores[g]);
    }
    return out;
}

Dataset::Dataset(std::size_t n_samples, std::size_t n_genes)
    : n_(n_samples),
      p_(n_genes),
      values_(n_samples * n_genes, 0.0),
      labels_(n_samples, Label::neg),
      gene_names_(n_genes),
      sample_ids_(n_samples) {
    for (std::size_t j = 0; j < p_; ++j) {
        gene_names_[j] = "g" + std::to_string(j + 1);
    }
    for (std::size_t i = 0; i < n_; ++i) {
        sample_ids_[i] = "s" + std::to_string(i + 1);
    }
}

void Dataset::set_gene_names(std::vector<std::string> names) {
    if (names.size() != p_) {
        throw std::invalid_argument("gene name count does not match gene count");
    }
    gene_names_ = std::move(names);
}

void Dataset::set_sample_ids(std::vector<std::string> ids) {
    if (ids.size() != n_) {
        throw std::invalid_argument("sample id count does not match sample count");
    }
    sample_ids_ = std::move(ids);
}

std::size_t Dataset::count(Label l) const {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), l));
}

std::vector<std::size_t> Dataset::indices_of(Label l) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n_; ++i) {
        if (labels_[i] == l) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<double> Dataset::gene_values(std::size_t gene) const {
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        out[i] = value(i, gene);
    }
    return out;
}

std::vector<double> Dataset::gene_values(std::size_t gene, Label l) const {
    std::vector<double> out;
    for (std::size_t i = 0; i < n_; ++i) {
        if (labels_[i] == l) {
            out.push_back(value(i, gene));
        }
    }
    return out;
}

Dataset Dataset::subset_samples(const std::vector<std::size_t>& rows) const {
    Dataset out(rows.size(), p_);
    out.gene_names_ = gene_names_;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::size_t i = rows[r];
        if (i >= n_) {
            throw std::out_of_range("subset_samples: row index out of range");
        }
        for (std::size_t j = 0; j < p_; ++j) {
            out.values_[r * p_ + j] = value(i, j);
        }
        out.labels_[r] = labels_[i];
        out.sample_ids_[r] = sample_ids_[i];
    }
    return out;
}

Dataset Dataset::subset_genes(const std::vector<std::size_t>& genes) const {
    Dataset out(n_, genes.size());
    out.labels_ = labels_;
    out.sample_ids_ = sample_ids_;
    for (std::size_t c = 0; c < genes.size(); ++c) {
        const std::size_t j = genes[c];
        if (j >= p_) {
            throw std::out_of_range("subset_genes: gene index out of range");
        }
        out.gene_names_[c] = gene_names_[j];
        for (std::size_t i = 0; i < n_; ++i) {
            out.values_[i * genes.size() + c] = value(i, j);
        }
    }
    return out;
}

void Dataset::append_sample(const std::vector<double>& row, Label l, std::string id) {
    if (row.size() != p_) {
        throw std::invalid_argument("append_sample: row length does not match gene count");
    }
    values_.insert(values_.end(), row.begin(), row.end());
    labels_.push_back(l);
    sample_ids_.push_back(std::move(id));
    ++n_;
}

void Dataset::validate() const {
    if (labels_.size() != n_ || sample_ids_.size() != n_ || gene_names_.size() != p_ ||
        values_.size() != n_ * p_) {
        throw std::logic_error("dataset shape is inconsistent");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw std::invalid_argument("dataset contains a non-finite value at flat index " +
                                        std::to_string(i));
        }
    }
}

Matrix reduced_matrix(const Dataset& d, const std::vector<std::size_t>& genes) {
    Matrix m(d.n_samples(), genes.size());
    for (std::size_t i = 0; i < d.n_samples(); ++i) {
        for (std::size_t c = 0; c < genes.size(); ++c) {
            m.at(i, c) = d.value(i, genes[c]);
        }
    }
    return m;
}

} // namespace rowsu
