#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flatcluster/clustering.hpp"
#include "flatcluster/generator.hpp"
#include "flatcluster/mc_lab.hpp"

namespace flatcluster {

inline constexpr int kFormatVersion = 1;

struct DatasetMetadata {
    std::optional<std::uint64_t> seed;
    std::optional<double> sigma;
    std::optional<double> mu;
    std::optional<double> radius;
    std::optional<double> delta;
    std::vector<Vector> centers;
};

struct DatasetFile {
    Index d = 0;
    Index k = 0;  // largest flat dimension
    std::vector<Flat> flats;
    std::vector<std::optional<long>> labels;
    DatasetMetadata metadata;
};

DatasetFile to_dataset_file(const LabeledDataset& data);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

/// Throws InvalidInput on malformed content.
DatasetFile read_dataset(std::istream& in);
void write_dataset(std::ostream& out, const DatasetFile& file);

/// Header i,j,distance,accepted,m_1..m_d; one row per pair.
void write_midpoints_csv(std::ostream& out, std::span<const PairProjection> pairs,
                         double accept_threshold);

struct ResultParameters {
    std::string mode;
    ClusterParams params;
    std::optional<std::size_t> sample_size;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> expected_clusters;
    bool drop_trivial = false;
};

void write_result(std::ostream& out, const Clustering& result, std::size_t flat_count,
                  const ResultParameters& params, const std::string& midpoints_path);

struct VerificationRecord {
    std::string label;
    double value = 0.0;
    double std_error = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::string gate;
    bool pass = false;
};

/// One JSON object on one line.
std::string to_json_line(const VerificationRecord& record);

/// "two-ball:<delta>" or "x,y,...;x,y,..." (zero-padded to d).
std::vector<Vector> parse_centers(std::string_view text, Index d);

}  // namespace flatcluster
