#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sl2a/models/network.hpp"

namespace sl2a {

inline nlohmann::json spec_to_json(const ModelSpec& s)
{
    nlohmann::json j;
    j["architecture"] = std::string(to_string(s.architecture));
    j["input_dim"] = s.input_dim;
    j["output_dim"] = s.output_dim;
    j["width"] = s.width;
    j["hidden_layers"] = s.hidden_layers;
    j["degree"] = s.degree;
    j["rank"] = s.rank ? nlohmann::json(*s.rank) : nlohmann::json(nullptr);
    j["omega0"] = s.omega0;
    j["gauss_spread"] = s.gauss_spread;
    j["fourier"] = {{"frequencies", s.fourier.num_frequencies},
                    {"base", s.fourier.base},
                    {"include_input", s.fourier.include_input}};
    j["seed"] = s.seed;
    return j;
}

inline ModelSpec spec_from_json(const nlohmann::json& j)
{
    try {
        ModelSpec s;
        s.architecture = parse_architecture(j.at("architecture").get<std::string>());
        s.input_dim = j.at("input_dim").get<std::size_t>();
        s.output_dim = j.at("output_dim").get<std::size_t>();
        s.width = j.at("width").get<std::size_t>();
        s.hidden_layers = j.at("hidden_layers").get<std::size_t>();
        s.degree = j.at("degree").get<std::size_t>();
        if (!j.at("rank").is_null()) s.rank = j.at("rank").get<std::size_t>();
        s.omega0 = j.at("omega0").get<double>();
        s.gauss_spread = j.at("gauss_spread").get<double>();
        const auto& f = j.at("fourier");
        s.fourier.num_frequencies = f.at("frequencies").get<std::size_t>();
        s.fourier.base = f.at("base").get<double>();
        s.fourier.include_input = f.at("include_input").get<bool>();
        s.seed = j.at("seed").get<std::uint64_t>();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("model spec: ") + e.what());
    }
}

// Checkpoint container, version 1. All integers little-endian.
//
//   offset  size  field
//   0       8     magic "SL2ACKPT"
//   8       4     u32 format version (= 1)
//   12      8     u64 byte length L of the spec JSON
//   20      L     spec JSON, UTF-8
//   ...     8     u64 number of parameter arrays K
//   then K records:
//           4     u32 name length
//           *     name bytes ("<layer>.<kind>.<param>")
//           8     u64 rows
//           8     u64 cols
//           8*r*c IEEE-754 binary64 values, row-major
inline constexpr std::array<char, 8> kCheckpointMagic{'S', 'L', '2', 'A', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

static_assert(std::endian::native == std::endian::little, "checkpoint IO assumes a little-endian host");

template <typename T>
void write_pod(std::ostream& os, T v)
{
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

class ByteReader {
public:
    explicit ByteReader(std::string bytes) : bytes_(std::move(bytes)) {}

    template <typename T>
    T pod(const char* what)
    {
        need(sizeof(T), what);
        T v;
        std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }

    std::string str(std::size_t n, const char* what)
    {
        need(n, what);
        std::string s = bytes_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    void doubles(std::span<double> out, const char* what)
    {
        need(out.size() * sizeof(double), what);
        std::memcpy(out.data(), bytes_.data() + pos_, out.size() * sizeof(double));
        pos_ += out.size() * sizeof(double);
    }

    std::size_t pos() const { return pos_; }
    bool at_end() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n, const char* what) const
    {
        if (bytes_.size() - pos_ < n) throw ParseError(std::string("checkpoint: truncated ") + what, pos_);
    }

    std::string bytes_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline std::string serialize_checkpoint(const Network& net)
{
    std::ostringstream os(std::ios::binary);
    os.write(kCheckpointMagic.data(), kCheckpointMagic.size());
    detail::write_pod<std::uint32_t>(os, kCheckpointVersion);
    const std::string spec = spec_to_json(net.spec()).dump();
    detail::write_pod<std::uint64_t>(os, spec.size());
    os.write(spec.data(), static_cast<std::streamsize>(spec.size()));
    const auto names = net.parameter_names();
    const auto values = net.snapshot();
    detail::write_pod<std::uint64_t>(os, values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        detail::write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(names[i].size()));
        os.write(names[i].data(), static_cast<std::streamsize>(names[i].size()));
        detail::write_pod<std::uint64_t>(os, values[i].rows());
        detail::write_pod<std::uint64_t>(os, values[i].cols());
        os.write(reinterpret_cast<const char*>(values[i].data().data()),
                 static_cast<std::streamsize>(values[i].size() * sizeof(double)));
    }
    return os.str();
}

inline Network deserialize_checkpoint(std::string bytes)
{
    detail::ByteReader in(std::move(bytes));
    if (in.str(kCheckpointMagic.size(), "magic") != std::string(kCheckpointMagic.data(), kCheckpointMagic.size()))
        throw ParseError("checkpoint: bad magic", 0);
    const std::size_t version_at = in.pos();
    const auto version = in.pod<std::uint32_t>("version");
    if (version != kCheckpointVersion)
        throw ParseError("checkpoint: unsupported version " + std::to_string(version), version_at);
    const auto spec_len = in.pod<std::uint64_t>("spec length");
    const std::size_t spec_at = in.pos();
    ModelSpec spec;
    try {
        spec = spec_from_json(nlohmann::json::parse(in.str(spec_len, "spec")));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("checkpoint: bad spec JSON: ") + e.what(), spec_at);
    } catch (const ConfigError& e) {
        throw ParseError(std::string("checkpoint: ") + e.what(), spec_at);
    }
    Network net = build(spec);
    auto params = net.parameters();
    const auto names = net.parameter_names();
    const std::size_t count_at = in.pos();
    const auto count = in.pod<std::uint64_t>("array count");
    if (count != params.size()) throw ParseError("checkpoint: array count does not match spec", count_at);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const std::size_t rec_at = in.pos();
        const auto name_len = in.pod<std::uint32_t>("name length");
        const std::string name = in.str(name_len, "name");
        const auto rows = in.pod<std::uint64_t>("rows");
        const auto cols = in.pod<std::uint64_t>("cols");
        if (name != names[i] || rows != params[i]->value.rows() || cols != params[i]->value.cols())
            throw ParseError("checkpoint: array '" + name + "' does not match the spec layout", rec_at);
        in.doubles(params[i]->value.data(), "values");
    }
    if (!in.at_end()) throw ParseError("checkpoint: trailing bytes", in.pos());
    return net;
}

inline void save_checkpoint(const Network& net, const std::filesystem::path& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    const std::string bytes = serialize_checkpoint(net);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline Network load_checkpoint(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return deserialize_checkpoint(ss.str());
}

}  // namespace sl2a
