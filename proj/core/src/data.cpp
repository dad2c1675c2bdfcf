#include "ellipsotron/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "ellipsotron/supervision.hpp"

namespace ellipsotron {

void SynthConfig::validate() const {
    if (dim < 1) throw std::invalid_argument("SynthConfig: dim must be >= 1");
    if (num_classes < 2) throw std::invalid_argument("SynthConfig: num_classes must be >= 2");
    if (pool_size < 1 || pool_size > dim)
        throw std::invalid_argument("SynthConfig: pool_size must be in [1, dim]");
    if (relevant_per_sample < 1 || relevant_per_sample > pool_size)
        throw std::invalid_argument(
            "SynthConfig: relevant_per_sample must be in [1, pool_size]");
    if (noise <= 0.0) throw std::invalid_argument("SynthConfig: noise must be > 0");
    if (samples_per_class < 1)
        throw std::invalid_argument("SynthConfig: samples_per_class must be >= 1");
    if (distractors_per_sample < 0 || distractors_per_sample > pool_size)
        throw std::invalid_argument(
            "SynthConfig: distractors_per_sample must be in [0, pool_size]");
    if (distractor_scale < 0.0)
        throw std::invalid_argument("SynthConfig: distractor_scale must be >= 0");
    if (epsilon < 0.0) throw std::invalid_argument("SynthConfig: epsilon must be >= 0");
}

Dataset generate_synthetic(const SynthConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> noise(0.0, cfg.noise);

    // Fixed feature pool per class.
    std::vector<std::vector<int>> pools(cfg.num_classes);
    std::vector<int> all_features(cfg.dim);
    std::iota(all_features.begin(), all_features.end(), 0);
    if (!cfg.overlapping_pools &&
        static_cast<long long>(cfg.pool_size) * cfg.num_classes > cfg.dim)
        throw std::invalid_argument("SynthConfig: disjoint pools need pool_size*m <= dim");
    if (cfg.overlapping_pools) {
        for (auto& pool : pools) {
            std::vector<int> feats = all_features;
            std::shuffle(feats.begin(), feats.end(), rng);
            pool.assign(feats.begin(), feats.begin() + cfg.pool_size);
            std::sort(pool.begin(), pool.end());
        }
    } else {
        std::vector<int> feats = all_features;
        std::shuffle(feats.begin(), feats.end(), rng);
        for (int c = 0; c < cfg.num_classes; ++c) {
            pools[c].assign(feats.begin() + static_cast<long>(c) * cfg.pool_size,
                            feats.begin() + static_cast<long>(c + 1) * cfg.pool_size);
            std::sort(pools[c].begin(), pools[c].end());
        }
    }

    Dataset ds;
    ds.dim = cfg.dim;
    ds.num_classes = cfg.num_classes;
    ds.source = "synthetic";
    ds.seed = cfg.seed;
    ds.samples.reserve(static_cast<std::size_t>(cfg.num_classes) * cfg.samples_per_class);
    for (int c = 0; c < cfg.num_classes; ++c) {
        for (int i = 0; i < cfg.samples_per_class; ++i) {
            Sample s;
            s.id = "c" + std::to_string(c) + "_s" + std::to_string(i);
            s.label = c;
            std::vector<int> pool = pools[c];
            std::shuffle(pool.begin(), pool.end(), rng);
            std::set<int> relevant(pool.begin(), pool.begin() + cfg.relevant_per_sample);
            s.features.resize(cfg.dim);
            VoteVec votes(cfg.dim, 0);
            for (int j = 0; j < cfg.dim; ++j) {
                const bool rel = relevant.count(j) > 0;
                s.features[j] = (rel ? cfg.signal : 0.0) + noise(rng);
                votes[j] = rel ? 1 : 0;
            }
            if (cfg.distractors_per_sample > 0 && cfg.distractor_scale > 0.0) {
                const int conf =
                    (c + 1 + static_cast<int>(rng() % (cfg.num_classes - 1))) %
                    cfg.num_classes;
                std::vector<int> other = pools[conf];
                std::shuffle(other.begin(), other.end(), rng);
                for (int r = 0; r < cfg.distractors_per_sample; ++r)
                    s.features[other[r]] += cfg.distractor_scale * cfg.signal;
            }
            s.precision = sample_level(votes, cfg.epsilon);
            s.votes = std::move(votes);
            ds.samples.push_back(std::move(s));
        }
    }
    return ds;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s, int row, const std::string& file) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(file + ": row " + std::to_string(row) +
                                 ": non-numeric cell '" + s + "'");
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Dataset load_dataset(const std::string& features_path,
                     const std::optional<std::string>& supervision_path,
                     double epsilon) {
    std::ifstream in(features_path);
    if (!in) throw std::runtime_error("cannot open features file: " + features_path);

    Dataset ds;
    ds.source = features_path;
    std::string line;
    int row = 0;
    if (!std::getline(in, line)) throw std::runtime_error(features_path + ": empty file");
    ++row;
    auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "id" || header[1] != "label")
        throw std::runtime_error(features_path + ": row 1: bad header, expected id,label,f0,...");
    const int d = static_cast<int>(header.size()) - 2;
    ds.dim = d;

    std::map<std::string, std::size_t> index_of_id;
    int max_label = -1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) != d + 2)
            throw std::runtime_error(features_path + ": row " + std::to_string(row) +
                                     ": expected " + std::to_string(d + 2) + " columns, got " +
                                     std::to_string(cells.size()));
        Sample s;
        s.id = cells[0];
        if (index_of_id.count(s.id))
            throw std::runtime_error(features_path + ": row " + std::to_string(row) +
                                     ": duplicate id '" + s.id + "'");
        const double label = parse_double(cells[1], row, features_path);
        s.label = static_cast<int>(label);
        if (s.label < 0 || label != s.label)
            throw std::runtime_error(features_path + ": row " + std::to_string(row) +
                                     ": label must be a nonnegative integer");
        max_label = std::max(max_label, s.label);
        s.features.resize(d);
        for (int j = 0; j < d; ++j)
            s.features[j] = parse_double(cells[j + 2], row, features_path);
        index_of_id[s.id] = ds.samples.size();
        ds.samples.push_back(std::move(s));
    }
    ds.num_classes = max_label + 1;

    if (supervision_path) {
        std::ifstream sin(*supervision_path);
        if (!sin) throw std::runtime_error("cannot open supervision file: " + *supervision_path);
        row = 0;
        bool votes_mode = false;
        if (!std::getline(sin, line))
            throw std::runtime_error(*supervision_path + ": empty file");
        ++row;
        if (line.rfind("#mode=", 0) == 0) {
            const std::string mode = line.substr(6);
            if (mode == "votes") votes_mode = true;
            else if (mode == "precision") votes_mode = false;
            else
                throw std::runtime_error(*supervision_path + ": row 1: unknown mode '" +
                                         mode + "'");
            if (!std::getline(sin, line))
                throw std::runtime_error(*supervision_path + ": missing header");
            ++row;
        }
        auto sheader = split_csv_line(line);
        if (sheader.size() != static_cast<std::size_t>(d) + 1 || sheader[0] != "id")
            throw std::runtime_error(*supervision_path + ": row " + std::to_string(row) +
                                     ": bad header, expected id,q0,...,q" + std::to_string(d - 1));
        while (std::getline(sin, line)) {
            ++row;
            if (line.empty()) continue;
            auto cells = split_csv_line(line);
            if (static_cast<int>(cells.size()) != d + 1)
                throw std::runtime_error(*supervision_path + ": row " + std::to_string(row) +
                                         ": expected " + std::to_string(d + 1) + " columns");
            auto it = index_of_id.find(cells[0]);
            if (it == index_of_id.end())
                throw std::runtime_error(*supervision_path + ": row " + std::to_string(row) +
                                         ": unknown id '" + cells[0] + "'");
            Sample& s = ds.samples[it->second];
            if (votes_mode) {
                VoteVec votes(d);
                for (int j = 0; j < d; ++j) {
                    const double v = parse_double(cells[j + 1], row, *supervision_path);
                    if (v != 0.0 && v != 1.0)
                        throw std::runtime_error(*supervision_path + ": row " +
                                                 std::to_string(row) + ": vote must be 0/1");
                    votes[j] = v != 0.0 ? 1 : 0;
                }
                s.precision = sample_level(votes, epsilon);
                s.votes = std::move(votes);
            } else {
                PrecisionDiag q;
                q.entries.resize(d);
                for (int j = 0; j < d; ++j) {
                    const double v = parse_double(cells[j + 1], row, *supervision_path);
                    if (v < 0.0)
                        throw std::runtime_error(*supervision_path + ": row " +
                                                 std::to_string(row) +
                                                 ": precision must be nonnegative");
                    q.entries[j] = v;
                }
                s.precision = std::move(q);
            }
        }
    }
    return ds;
}

void save_dataset(const Dataset& ds, const std::string& features_path,
                  const std::string& supervision_path,
                  const std::string& metadata_path) {
    {
        std::ofstream out(features_path);
        if (!out) throw std::runtime_error("cannot write " + features_path);
        out << "id,label";
        for (int j = 0; j < ds.dim; ++j) out << ",f" << j;
        out << "\n";
        for (const Sample& s : ds.samples) {
            out << s.id << "," << s.label;
            for (double v : s.features) out << "," << format_double(v);
            out << "\n";
        }
    }
    {
        std::ofstream out(supervision_path);
        if (!out) throw std::runtime_error("cannot write " + supervision_path);
        const bool votes_mode = !ds.samples.empty() && ds.samples.front().votes.has_value();
        out << (votes_mode ? "#mode=votes\n" : "#mode=precision\n");
        out << "id";
        for (int j = 0; j < ds.dim; ++j) out << ",q" << j;
        out << "\n";
        for (const Sample& s : ds.samples) {
            out << s.id;
            if (votes_mode) {
                for (auto v : *s.votes) out << "," << static_cast<int>(v);
            } else if (s.precision) {
                for (double v : s.precision->entries) out << "," << format_double(v);
            } else {
                throw std::runtime_error("save_dataset: sample '" + s.id +
                                         "' has no supervision");
            }
            out << "\n";
        }
    }
    {
        nlohmann::ordered_json meta;
        meta["source"] = ds.source;
        meta["seed"] = ds.seed;
        meta["dim"] = ds.dim;
        meta["num_classes"] = ds.num_classes;
        meta["num_samples"] = ds.samples.size();
        if (!ds.config_hash.empty()) meta["config_hash"] = ds.config_hash;
        std::ofstream out(metadata_path);
        if (!out) throw std::runtime_error("cannot write " + metadata_path);
        out << meta.dump(2) << "\n";
    }
}

SplitResult split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
        throw std::invalid_argument("split: train_fraction must be in (0,1)");
    std::vector<std::vector<std::size_t>> by_class(ds.num_classes);
    for (std::size_t i = 0; i < ds.samples.size(); ++i)
        by_class[ds.samples[i].label].push_back(i);

    std::mt19937_64 rng(seed);
    SplitResult out;
    out.train.dim = out.test.dim = ds.dim;
    out.train.num_classes = out.test.num_classes = ds.num_classes;
    out.train.source = out.test.source = ds.source;
    out.train.seed = out.test.seed = seed;
    for (int c = 0; c < ds.num_classes; ++c) {
        auto& idx = by_class[c];
        if (idx.size() < 2)
            throw std::runtime_error("split: class " + std::to_string(c) +
                                     " has fewer than 2 samples");
        std::shuffle(idx.begin(), idx.end(), rng);
        const auto n_train = static_cast<std::size_t>(
            std::llround(train_fraction * static_cast<double>(idx.size())));
        const std::size_t n = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
        for (std::size_t i = 0; i < idx.size(); ++i)
            (i < n ? out.train : out.test).samples.push_back(ds.samples[idx[i]]);
    }
    return out;
}

Dataset filter_by_class_size(const Dataset& ds, int min_samples, int max_samples) {
    std::vector<int> counts(ds.num_classes, 0);
    for (const Sample& s : ds.samples) ++counts[s.label];
    std::vector<int> relabel(ds.num_classes, -1);
    int next = 0;
    for (int c = 0; c < ds.num_classes; ++c)
        if (counts[c] >= min_samples && counts[c] <= max_samples) relabel[c] = next++;
    Dataset out;
    out.dim = ds.dim;
    out.num_classes = next;
    out.source = ds.source;
    out.seed = ds.seed;
    for (const Sample& s : ds.samples) {
        if (relabel[s.label] < 0) continue;
        Sample copy = s;
        copy.label = relabel[s.label];
        out.samples.push_back(std::move(copy));
    }
    return out;
}

}  // namespace ellipsotron
