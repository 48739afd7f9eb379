#include "dmapper/ingest.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <random>

#include "dmapper/error.hpp"
#include "text_util.hpp"

namespace dmapper {

PointCloud gen_circle(std::array<double, 2> center, double radius, std::size_t count, std::uint64_t seed) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("circle radius must be positive");
    if (count == 0) throw ConfigError("circle point count must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<double> coords;
    coords.reserve(2 * count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = angle(rng);
        coords.push_back(center[0] + radius * std::cos(t));
        coords.push_back(center[1] + radius * std::sin(t));
    }
    return PointCloud(count, 2, std::move(coords));
}

PointCloud gen_two_circles(std::array<double, 2> center_a, std::array<double, 2> center_b, double radius,
                           std::size_t count_each, std::uint64_t seed) {
    const PointCloud a = gen_circle(center_a, radius, count_each, derive_seed(seed, 0));
    const PointCloud b = gen_circle(center_b, radius, count_each, derive_seed(seed, 1));
    std::vector<double> coords = a.coords();
    coords.insert(coords.end(), b.coords().begin(), b.coords().end());
    return PointCloud(2 * count_each, 2, std::move(coords));
}

PointCloud parse_xyz(const std::string& text) {
    PointCloud pc = parse_points_csv(text, false);
    if (pc.dim() != 3) {
        throw DataError("xyz input must have 3 fields per row, found " + std::to_string(pc.dim()));
    }
    return pc;
}

PointCloud load_xyz(const std::filesystem::path& path) { return parse_xyz(detail::read_file(path)); }

std::vector<SequenceRecord> parse_fasta(const std::string& text) {
    std::vector<SequenceRecord> out;
    std::size_t line_no = 0;
    for (auto raw : detail::split_lines(text)) {
        ++line_no;
        auto line = detail::trim(raw);
        if (line.empty() || line.front() == ';') continue;
        if (line.front() == '>') {
            if (!out.empty() && out.back().bases.empty()) {
                throw DataError("FASTA record '" + out.back().id + "' has no sequence (line " +
                                std::to_string(line_no) + ")");
            }
            auto header = detail::trim(line.substr(1));
            auto id = header.substr(0, header.find_first_of(" \t"));
            if (id.empty()) throw DataError("FASTA header without id at line " + std::to_string(line_no));
            out.push_back({std::string(id), {}});
            continue;
        }
        if (out.empty()) {
            throw DataError("FASTA sequence data before the first header at line " + std::to_string(line_no));
        }
        for (char c : line) {
            if (std::isspace(static_cast<unsigned char>(c))) continue;
            out.back().bases.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        }
    }
    if (out.empty()) throw DataError("FASTA input contains no records");
    if (out.back().bases.empty()) throw DataError("FASTA record '" + out.back().id + "' has no sequence");
    return out;
}

std::vector<SequenceRecord> read_fasta(const std::filesystem::path& path) {
    return parse_fasta(detail::read_file(path));
}

void write_fasta(const std::filesystem::path& path, const std::vector<SequenceRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += '>' + r.id + '\n';
        for (std::size_t i = 0; i < r.bases.size(); i += 70) out += r.bases.substr(i, 70) + '\n';
    }
    detail::write_file(path, out);
}

namespace {

int base_code(char c) {
    switch (c) {
        case 'A': return 0;
        case 'C': return 1;
        case 'G': return 2;
        case 'T': return 3;
        default: return -1;
    }
}

}  // namespace

KmerVector kmer_freq(const SequenceRecord& rec, std::size_t k) {
    if (k == 0 || k > 12) throw ConfigError("k-mer length must be in [1, 12]");
    if (rec.bases.size() < k) {
        throw DataError("sequence '" + rec.id + "' is shorter than k=" + std::to_string(k));
    }
    const std::size_t dim = std::size_t{1} << (2 * k);
    const std::size_t mask = dim - 1;
    std::vector<double> counts(dim, 0.0);
    std::size_t code = 0;
    std::size_t run = 0;  // consecutive valid bases ending at the current position
    std::size_t windows = 0;
    for (char c : rec.bases) {
        const int b = base_code(c);
        if (b < 0) {
            run = 0;
            code = 0;
            continue;
        }
        code = ((code << 2) | static_cast<std::size_t>(b)) & mask;
        if (++run >= k) {
            counts[code] += 1.0;
            ++windows;
        }
    }
    if (windows == 0) throw DataError("sequence '" + rec.id + "' has no valid " + std::to_string(k) + "-mer");
    for (double& c : counts) c /= static_cast<double>(windows);
    return {k, std::move(counts)};
}

DistanceMatrix pairwise_distance(const std::vector<KmerVector>& vectors) {
    const std::size_t n = vectors.size();
    if (n < 2) throw DataError("pairwise distance needs at least two vectors");
    const std::size_t dim = vectors.front().freqs.size();
    for (const auto& v : vectors) {
        if (v.freqs.size() != dim) throw DataError("k-mer vectors have mismatched dimensions");
    }
    std::vector<double> out(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < dim; ++t) {
                const double d = vectors[i].freqs[t] - vectors[j].freqs[t];
                s += d * d;
            }
            out[i * n + j] = out[j * n + i] = std::sqrt(s);
        }
    }
    return DistanceMatrix(n, std::move(out));
}

std::vector<SequenceRecord> gen_synthetic_fasta(std::size_t records, std::size_t length, std::size_t lineages,
                                                double mutation_rate, std::uint64_t seed) {
    if (records == 0 || length == 0 || lineages == 0) throw ConfigError("synthetic FASTA sizes must be positive");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw ConfigError("mutation rate must lie in [0, 1]");
    static constexpr char kBases[4] = {'A', 'C', 'G', 'T'};
    std::mt19937_64 rng(derive_seed(seed, 0));
    std::uniform_int_distribution<int> base(0, 3);
    std::vector<std::string> ancestors(lineages);
    for (auto& a : ancestors) {
        a.resize(length);
        for (char& c : a) c = kBases[base(rng)];
    }
    std::vector<SequenceRecord> out;
    out.reserve(records);
    std::bernoulli_distribution mutate(mutation_rate);
    for (std::size_t r = 0; r < records; ++r) {
        const std::size_t lineage = r % lineages;
        std::string s = ancestors[lineage];
        for (char& c : s) {
            if (mutate(rng)) c = kBases[base(rng)];
        }
        out.push_back({"seq" + std::to_string(r) + "_L" + std::to_string(lineage), std::move(s)});
    }
    return out;
}

}  // namespace dmapper
