#include "rowsu/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rowsu/rng.hpp"

namespace rowsu {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_cell(const std::string& field, const std::string& path, std::size_t line_no,
                  std::size_t col_no, const std::string& col_name) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || field.empty()) {
        std::ostringstream msg;
        msg << path << ": line " << line_no << ", column " << col_no << " (\"" << col_name
            << "\"): " << (field.empty() ? "empty cell" : "non-numeric value '" + field + "'");
        throw std::runtime_error(msg.str());
    }
    if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << path << ": line " << line_no << ", column " << col_no << " (\"" << col_name
            << "\"): non-finite value";
        throw std::runtime_error(msg.str());
    }
    return v;
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::string& positive_label) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error(path + ": empty file, missing header row");
    }
    const std::vector<std::string> header = split_line(line);

    std::size_t label_idx = header.size();
    std::vector<std::string> gene_names;
    std::vector<std::size_t> gene_cols;
    std::set<std::string> seen;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == label_column) {
            if (label_idx != header.size()) {
                throw std::runtime_error(path + ": duplicate label column \"" + label_column + "\"");
            }
            label_idx = c;
            continue;
        }
        if (!seen.insert(header[c]).second) {
            throw std::runtime_error(path + ": duplicate gene name \"" + header[c] +
                                     "\" at header column " + std::to_string(c + 1));
        }
        gene_names.push_back(header[c]);
        gene_cols.push_back(c);
    }
    if (label_idx == header.size()) {
        throw std::runtime_error(path + ": label column \"" + label_column + "\" not found");
    }

    std::vector<double> values;
    std::vector<std::string> raw_labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const std::vector<std::string> fields = split_line(line);
        if (fields.size() != header.size()) {
            throw std::runtime_error(path + ": line " + std::to_string(line_no) + " has " +
                                     std::to_string(fields.size()) + " fields, expected " +
                                     std::to_string(header.size()));
        }
        for (std::size_t k = 0; k < gene_cols.size(); ++k) {
            const std::size_t c = gene_cols[k];
            values.push_back(parse_cell(fields[c], path, line_no, c + 1, header[c]));
        }
        raw_labels.push_back(fields[label_idx]);
    }

    const std::size_t n = raw_labels.size();
    const std::size_t p = gene_names.size();
    if (n == 0) {
        throw std::runtime_error(path + ": no data rows");
    }

    std::set<std::string> distinct(raw_labels.begin(), raw_labels.end());
    if (distinct.size() != 2) {
        throw std::runtime_error(path + ": label column \"" + label_column + "\" has " +
                                 std::to_string(distinct.size()) +
                                 " distinct values, expected exactly 2");
    }
    if (distinct.find(positive_label) == distinct.end()) {
        throw std::runtime_error(path + ": positive label \"" + positive_label +
                                 "\" does not occur in column \"" + label_column + "\"");
    }

    Dataset d(n, p);
    d.set_gene_names(std::move(gene_names));
    for (std::size_t i = 0; i < n; ++i) {
        d.set_label(i, raw_labels[i] == positive_label ? Label::pos : Label::neg);
        for (std::size_t j = 0; j < p; ++j) {
            d.set_value(i, j, values[i * p + j]);
        }
    }
    d.validate();
    return d;
}

void save_csv(const Dataset& d, const std::string& path, const std::string& label_column) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path);
    }
    for (std::size_t j = 0; j < d.n_genes(); ++j) {
        out << d.gene_name(j) << ',';
    }
    out << label_column << '\n';
    for (std::size_t i = 0; i < d.n_samples(); ++i) {
        for (std::size_t j = 0; j < d.n_genes(); ++j) {
            out << format_value(d.value(i, j)) << ',';
        }
        out << label_name(d.label(i)) << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

Dataset enforce_imbalance(const Dataset& d, std::pair<int, int> ratio, std::uint64_t seed) {
    if (ratio.first < ratio.second || ratio.second < 1) {
        throw std::invalid_argument("imbalance ratio must satisfy maj >= min >= 1");
    }
    const std::size_t n_neg = d.count(Label::neg);
    const std::size_t n_pos = d.count(Label::pos);
    if (n_neg == 0 || n_pos == 0) {
        throw std::invalid_argument("enforce_imbalance: both classes must be present");
    }
    if (n_pos > n_neg) {
        throw std::invalid_argument("enforce_imbalance: pos is not the minority class (" +
                                    std::to_string(n_pos) + " pos vs " + std::to_string(n_neg) +
                                    " neg)");
    }
    const std::size_t target_pos =
        (n_neg * static_cast<std::size_t>(ratio.second)) / static_cast<std::size_t>(ratio.first);
    if (target_pos < 1) {
        throw std::invalid_argument("enforce_imbalance: target pos count would be zero");
    }
    if (n_pos < target_pos) {
        throw std::invalid_argument(
            "enforce_imbalance: ratio unreachable without discarding majority rows (" +
            std::to_string(n_pos) + " pos, target " + std::to_string(target_pos) + ")");
    }
    if (n_pos == target_pos) {
        return d;
    }

    const std::vector<std::size_t> pos_rows = d.indices_of(Label::pos);
    Rng rng(derive_seed(seed, {0x1b5a}));
    std::vector<std::size_t> kept_pos_slots = rng.sample_without_replacement(pos_rows.size(), target_pos);
    std::sort(kept_pos_slots.begin(), kept_pos_slots.end());

    std::vector<bool> keep(d.n_samples(), false);
    for (std::size_t i = 0; i < d.n_samples(); ++i) {
        if (d.label(i) == Label::neg) {
            keep[i] = true;
        }
    }
    for (std::size_t slot : kept_pos_slots) {
        keep[pos_rows[slot]] = true;
    }
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < d.n_samples(); ++i) {
        if (keep[i]) {
            rows.push_back(i);
        }
    }
    return d.subset_samples(rows);
}

SplitResult stratified_split(const Dataset& d, const SplitSpec& spec) {
    if (spec.train_fraction <= 0.0 || spec.train_fraction >= 1.0) {
        throw std::invalid_argument("train_fraction must lie strictly between 0 and 1");
    }
    if (spec.imbalance_ratio &&
        (spec.imbalance_ratio->first < spec.imbalance_ratio->second ||
         spec.imbalance_ratio->second < 1)) {
        throw std::invalid_argument("imbalance ratio must satisfy maj >= min >= 1");
    }
    for (Label l : {Label::neg, Label::pos}) {
        if (d.count(l) < 2) {
            throw std::invalid_argument(std::string("stratified_split: class ") + label_name(l) +
                                        " has fewer than 2 samples");
        }
    }

    Rng rng(derive_seed(spec.seed, {0x5147}));
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    for (Label l : {Label::neg, Label::pos}) {
        const std::vector<std::size_t> rows = d.indices_of(l);
        const std::size_t n_train =
            static_cast<std::size_t>(spec.train_fraction * static_cast<double>(rows.size()));
        std::vector<std::size_t> slots = rng.sample_without_replacement(rows.size(), n_train);
        std::vector<bool> in_train(rows.size(), false);
        for (std::size_t s : slots) {
            in_train[s] = true;
        }
        for (std::size_t k = 0; k < rows.size(); ++k) {
            (in_train[k] ? train_rows : test_rows).push_back(rows[k]);
        }
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    return SplitResult{d.subset_samples(train_rows), d.subset_samples(test_rows)};
}

SynthResult synth_generate(const SynthSpec& spec) {
    if (spec.n_informative > spec.n_genes) {
        throw std::invalid_argument("synth_generate: n_informative exceeds gene count");
    }
    if (spec.shift < 0.0) {
        throw std::invalid_argument("synth_generate: shift must be >= 0");
    }
    if (spec.outlier_rate < 0.0 || spec.outlier_rate >= 1.0) {
        throw std::invalid_argument("synth_generate: outlier_rate must lie in [0, 1)");
    }

    const std::size_t n = spec.n_neg + spec.n_pos;
    Dataset d(n, spec.n_genes);
    for (std::size_t i = 0; i < spec.n_pos; ++i) {
        d.set_label(spec.n_neg + i, Label::pos);
    }

    Rng placement(derive_seed(spec.seed, {0x91a2}));
    std::vector<std::size_t> planted =
        placement.sample_without_replacement(spec.n_genes, spec.n_informative);
    std::sort(planted.begin(), planted.end());
    std::vector<bool> is_planted(spec.n_genes, false);
    for (std::size_t j : planted) {
        is_planted[j] = true;
    }

    // Subtype mixture: mean is exactly `shift` because
    // 0.66 * (39/22) * shift - 0.34 * shift / 2 = shift.
    const double high_center = spec.shift * (39.0 / 22.0);
    const double low_center = -spec.shift / 2.0;
    const double high_weight = 0.66;
    // One erratic positive sample whose planted cells are mean-neutral but
    // high-variance, N(shift, 1 + (4.5*shift)^2). Degenerates to the common
    // model when shift is 0.
    const double erratic_sd = std::sqrt(1.0 + 20.25 * spec.shift * spec.shift);

    Rng rng(derive_seed(spec.seed, {0xce11}));
    const std::size_t erratic_sample =
        spec.n_pos > 0 ? spec.n_neg + rng.next_index(spec.n_pos) : n;
    for (std::size_t i = 0; i < n; ++i) {
        const bool positive = d.label(i) == Label::pos;
        for (std::size_t j = 0; j < spec.n_genes; ++j) {
            double v = rng.next_gaussian();
            if (positive && is_planted[j]) {
                if (i == erratic_sample) {
                    v = spec.shift + erratic_sd * rng.next_gaussian();
                } else {
                    v += (rng.next_unit() < high_weight) ? high_center : low_center;
                }
            }
            if (spec.outlier_rate > 0.0 && rng.next_unit() < spec.outlier_rate) {
                v = rng.next_unit() < 0.5 ? -50.0 : 50.0;
            }
            d.set_value(i, j, v);
        }
    }
    d.validate();
    return SynthResult{std::move(d), std::move(planted)};
}

} // namespace rowsu
