#pragma once
// Synthetic generators and file loaders for the benchmark datasets.

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dmapper/core_data.hpp"
#include "dmapper/random.hpp"

namespace dmapper {

struct SequenceRecord {
    std::string id;
    std::string bases;
};

struct KmerVector {
    std::size_t k = 0;
    std::vector<double> freqs;  // length 4^k, A<C<G<T base-4 encoding, first base most significant
};

/// `count` points on the circle of the given radius, angle uniform on [0, 2pi).
PointCloud gen_circle(std::array<double, 2> center, double radius, std::size_t count, std::uint64_t seed);

/// Two gen_circle outputs concatenated; each circle uses its own sub-seed.
PointCloud gen_two_circles(std::array<double, 2> center_a, std::array<double, 2> center_b, double radius,
                           std::size_t count_each, std::uint64_t seed);

/// 3-column point file (comma or whitespace separated, LF or CRLF).
PointCloud load_xyz(const std::filesystem::path& path);
PointCloud parse_xyz(const std::string& text);

std::vector<SequenceRecord> read_fasta(const std::filesystem::path& path);
std::vector<SequenceRecord> parse_fasta(const std::string& text);
void write_fasta(const std::filesystem::path& path, const std::vector<SequenceRecord>& records);

/// Normalized k-mer counts; windows containing a base outside ACGT are skipped.
KmerVector kmer_freq(const SequenceRecord& rec, std::size_t k);

/// Euclidean distances between frequency vectors.
DistanceMatrix pairwise_distance(const std::vector<KmerVector>& vectors);

/// Random sequences descended from `lineages` ancestors by point mutation.
/// Used to exercise the sequence pipeline without real genomes.
std::vector<SequenceRecord> gen_synthetic_fasta(std::size_t records, std::size_t length, std::size_t lineages,
                                                double mutation_rate, std::uint64_t seed);

}  // namespace dmapper
