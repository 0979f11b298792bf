#include "flatcluster/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "flatcluster/errors.hpp"
#include "json.hpp"

namespace flatcluster {

using json = nlohmann::ordered_json;

namespace {

json vector_json(const Vector& v) {
    json arr = json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Vector vector_from(const json& arr, Index expected, const std::string& what) {
    if (!arr.is_array()) throw InvalidInput(what + " must be an array");
    if (expected >= 0 && static_cast<Index>(arr.size()) != expected) {
        throw InvalidInput(what + " has length " + std::to_string(arr.size()) + ", expected " +
                           std::to_string(expected));
    }
    Vector v(static_cast<Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) throw InvalidInput(what + " contains a non-number");
        v(static_cast<Index>(i)) = arr[i].get<double>();
    }
    if (!v.allFinite()) throw InvalidInput(what + " contains non-finite values");
    return v;
}

template <typename T>
std::optional<T> optional_field(const json& obj, const char* key) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    return obj.at(key).get<T>();
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

DatasetFile to_dataset_file(const LabeledDataset& data) {
    DatasetFile file;
    file.d = data.config.d;
    file.k = data.config.k;
    file.flats = data.flats;
    for (auto l : data.labels) file.labels.emplace_back(static_cast<long>(l));
    file.metadata.seed = data.config.seed;
    file.metadata.sigma = data.config.sigma;
    file.metadata.mu = data.config.mu;
    file.metadata.radius = data.config.radius;
    file.metadata.delta = data.config.delta;
    file.metadata.centers = data.config.centers;
    return file;
}

void write_dataset(std::ostream& out, const DatasetFile& file) {
    json doc;
    doc["format_version"] = kFormatVersion;
    doc["d"] = file.d;
    doc["k"] = file.k;
    json meta;
    meta["seed"] = file.metadata.seed ? json(*file.metadata.seed) : json(nullptr);
    meta["sigma"] = file.metadata.sigma ? json(*file.metadata.sigma) : json(nullptr);
    meta["mu"] = file.metadata.mu ? json(*file.metadata.mu) : json(nullptr);
    meta["radius"] = file.metadata.radius ? json(*file.metadata.radius) : json(nullptr);
    meta["delta"] = file.metadata.delta ? json(*file.metadata.delta) : json(nullptr);
    json centers = json::array();
    for (const auto& c : file.metadata.centers) centers.push_back(vector_json(c));
    meta["centers"] = std::move(centers);
    meta["format_version"] = kFormatVersion;
    doc["metadata"] = std::move(meta);
    json flats = json::array();
    for (std::size_t i = 0; i < file.flats.size(); ++i) {
        const Flat& f = file.flats[i];
        json entry;
        entry["base"] = vector_json(f.base());
        json dirs = json::array();
        for (Index j = 0; j < f.dim(); ++j) dirs.push_back(vector_json(f.directions().col(j)));
        entry["dirs"] = std::move(dirs);
        const bool has_label = i < file.labels.size() && file.labels[i].has_value();
        entry["label"] = has_label ? json(*file.labels[i]) : json(nullptr);
        flats.push_back(std::move(entry));
    }
    doc["flats"] = std::move(flats);
    out << doc.dump() << '\n';
}

DatasetFile read_dataset(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("dataset is not valid JSON: ") + e.what());
    }
    try {
        if (!doc.is_object()) throw InvalidInput("dataset must be a JSON object");
        if (doc.value("format_version", -1) != kFormatVersion) {
            throw InvalidInput("unsupported dataset format_version");
        }
        DatasetFile file;
        file.d = doc.at("d").get<Index>();
        file.k = doc.at("k").get<Index>();
        if (file.d < 2) throw InvalidInput("dataset d must be at least 2");
        if (doc.contains("metadata") && doc.at("metadata").is_object()) {
            const json& meta = doc.at("metadata");
            file.metadata.seed = optional_field<std::uint64_t>(meta, "seed");
            file.metadata.sigma = optional_field<double>(meta, "sigma");
            file.metadata.mu = optional_field<double>(meta, "mu");
            file.metadata.radius = optional_field<double>(meta, "radius");
            file.metadata.delta = optional_field<double>(meta, "delta");
            if (meta.contains("centers")) {
                for (const auto& c : meta.at("centers")) {
                    file.metadata.centers.push_back(vector_from(c, file.d, "center"));
                }
            }
        }
        const json& flats = doc.at("flats");
        if (!flats.is_array()) throw InvalidInput("flats must be an array");
        Index max_k = 0;
        for (std::size_t i = 0; i < flats.size(); ++i) {
            const json& entry = flats[i];
            const std::string where = "flat " + std::to_string(i);
            Vector base = vector_from(entry.at("base"), file.d, where + " base");
            const json& dirs = entry.at("dirs");
            if (!dirs.is_array() || dirs.empty()) {
                throw InvalidInput(where + " needs at least one direction");
            }
            Matrix m(file.d, static_cast<Index>(dirs.size()));
            for (std::size_t j = 0; j < dirs.size(); ++j) {
                m.col(static_cast<Index>(j)) =
                    vector_from(dirs[j], file.d, where + " direction " + std::to_string(j));
            }
            try {
                file.flats.emplace_back(std::move(base), std::move(m));
            } catch (const std::exception& e) {
                throw InvalidInput(where + ": " + e.what());
            }
            max_k = std::max(max_k, file.flats.back().dim());
            file.labels.push_back(optional_field<long>(entry, "label"));
        }
        if (!file.flats.empty() && max_k != file.k) {
            throw InvalidInput("dataset k=" + std::to_string(file.k) +
                               " does not match the largest flat dimension " +
                               std::to_string(max_k));
        }
        return file;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed dataset: ") + e.what());
    }
}

void write_midpoints_csv(std::ostream& out, std::span<const PairProjection> pairs,
                         double accept_threshold) {
    const Index d = pairs.empty() ? 0 : pairs.front().midpoint.size();
    out << "i,j,distance,accepted";
    for (Index t = 1; t <= d; ++t) out << ",m_" << t;
    out << "\r\n";
    for (const auto& p : pairs) {
        out << p.i << ',' << p.j << ',' << format_double(p.distance) << ','
            << (p.distance <= accept_threshold ? 1 : 0);
        for (Index t = 0; t < p.midpoint.size(); ++t) out << ',' << format_double(p.midpoint(t));
        out << "\r\n";
    }
}

void write_result(std::ostream& out, const Clustering& result, std::size_t flat_count,
                  const ResultParameters& rp, const std::string& midpoints_path) {
    json doc;
    doc["format_version"] = kFormatVersion;
    json params;
    params["mode"] = rp.mode;
    params["accept_threshold"] = rp.params.accept_threshold;
    params["link_threshold"] = rp.params.link_threshold;
    params["min_cluster_size"] = rp.params.min_cluster_size;
    params["ball_radius"] = rp.params.ball_radius;
    params["rank_tol"] = rp.params.rank_tol;
    params["sample_size"] = rp.sample_size ? json(*rp.sample_size) : json(nullptr);
    params["seed"] = rp.seed ? json(*rp.seed) : json(nullptr);
    params["expected_clusters"] = rp.expected_clusters ? json(*rp.expected_clusters) : json(nullptr);
    params["drop_trivial"] = rp.drop_trivial;
    doc["parameters"] = std::move(params);
    doc["n_flats"] = flat_count;
    doc["accepted_pairs"] = result.accepted_pairs;
    doc["rejected_pairs"] = result.rejected_pairs;
    json clusters = json::array();
    for (const auto& cl : result.clusters) {
        for (auto m : cl.members) {
            if (m >= flat_count) throw InvalidInput("cluster member index out of range");
        }
        json c;
        c["size"] = cl.size();
        c["members"] = cl.members;
        c["center"] = vector_json(cl.center);
        json pairs = json::array();
        for (const auto& [i, j] : cl.pairs) pairs.push_back({i, j});
        c["pairs"] = std::move(pairs);
        clusters.push_back(std::move(c));
    }
    doc["clusters"] = std::move(clusters);
    doc["labels"] = result.labels;
    doc["midpoints"] = midpoints_path.empty() ? json(nullptr) : json(midpoints_path);
    out << doc.dump() << '\n';
}

std::string to_json_line(const VerificationRecord& r) {
    json doc;
    doc["label"] = r.label;
    doc["value"] = r.value;
    doc["stderr"] = r.std_error;
    doc["ci99"] = {r.ci_lo, r.ci_hi};
    doc["gate"] = r.gate;
    doc["pass"] = r.pass;
    return doc.dump();
}

std::vector<Vector> parse_centers(std::string_view text, Index d) {
    if (d < 1) throw InvalidInput("d must be positive");
    constexpr std::string_view kTwoBall = "two-ball:";
    if (text.starts_with(kTwoBall)) {
        const std::string num(text.substr(kTwoBall.size()));
        double delta = 0.0;
        const auto res = std::from_chars(num.data(), num.data() + num.size(), delta);
        if (res.ec != std::errc() || res.ptr != num.data() + num.size() || !(delta > 0.0) ||
            !std::isfinite(delta)) {
            throw InvalidInput("two-ball needs a positive separation, got '" + num + "'");
        }
        return two_ball_centers(d, delta);
    }
    std::vector<Vector> centers;
    std::stringstream groups{std::string(text)};
    std::string group;
    while (std::getline(groups, group, ';')) {
        if (group.empty()) continue;
        std::vector<double> coords;
        std::stringstream parts(group);
        std::string part;
        while (std::getline(parts, part, ',')) {
            double value = 0.0;
            const char* first = part.data();
            const char* last = part.data() + part.size();
            while (first < last && *first == ' ') ++first;
            const auto res = std::from_chars(first, last, value);
            if (res.ec != std::errc() || res.ptr != last || !std::isfinite(value)) {
                throw InvalidInput("bad center coordinate '" + part + "'");
            }
            coords.push_back(value);
        }
        if (static_cast<Index>(coords.size()) > d) {
            throw InvalidInput("center has more than d coordinates");
        }
        Vector c = Vector::Zero(d);
        for (std::size_t i = 0; i < coords.size(); ++i) c(static_cast<Index>(i)) = coords[i];
        centers.push_back(std::move(c));
    }
    if (centers.empty()) throw InvalidInput("no centers given");
    return centers;
}

}  // namespace flatcluster
