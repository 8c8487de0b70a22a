#pragma once

// Tensor container (.otn):
//
//   offset  size  field
//   0       8     magic "ORTHOTNS"
//   8       4     format version, uint32 little-endian (= 1)
//   12      4     order k, uint32 little-endian
//   16      4     dimension d, uint32 little-endian
//   20      4     reserved, zero
//   24      8*d^k entries, IEEE-754 float64 little-endian, canonical layout
//                 (first index fastest)
//
// Instances carry a JSON sidecar with the ground truth, noise spec and seed.

#include "orthotensor/rank_select.hpp"
#include "orthotensor/synth.hpp"
#include "orthotensor/tensor.hpp"
#include "orthotensor/tmhosvd.hpp"

#include <json.hpp>

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace orthotensor {

static_assert(std::endian::native == std::endian::little, "tensor container I/O assumes a little-endian host");

/// Failure to open, read or write a file.
class io_error : public std::runtime_error
{
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed file contents.
class format_error : public std::runtime_error
{
public:
    explicit format_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr std::array<char, 8> kTensorMagic{'O', 'R', 'T', 'H', 'O', 'T', 'N', 'S'};
inline constexpr std::uint32_t kTensorFormatVersion = 1;

inline void write_tensor(std::ostream& os, const DenseSymmetricTensor& t)
{
    const std::uint32_t header[4] = {kTensorFormatVersion, static_cast<std::uint32_t>(t.order()),
                                     static_cast<std::uint32_t>(t.dim()), 0};
    os.write(kTensorMagic.data(), kTensorMagic.size());
    os.write(reinterpret_cast<const char*>(header), sizeof(header));
    os.write(reinterpret_cast<const char*>(t.data().data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
}

inline DenseSymmetricTensor read_tensor(std::istream& is)
{
    std::array<char, 8> magic{};
    std::uint32_t header[4] = {};
    if (!is.read(magic.data(), magic.size()) || magic != kTensorMagic)
        throw format_error("tensor container: bad magic");
    if (!is.read(reinterpret_cast<char*>(header), sizeof(header)))
        throw format_error("tensor container: truncated header");
    if (header[0] != kTensorFormatVersion)
        throw format_error("tensor container: unsupported version " + std::to_string(header[0]));
    const int order = static_cast<int>(header[1]);
    const int dim = static_cast<int>(header[2]);
    if (order < 2 || order > kMaxOrder || dim < 1)
        throw format_error("tensor container: invalid shape");
    std::size_t n = 0;
    try {
        n = detail::checked_pow(dim, order);
    } catch (const std::invalid_argument& e) {
        throw format_error(std::string("tensor container: ") + e.what());
    }
    std::vector<double> data(n);
    if (!is.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(n * sizeof(double))))
        throw format_error("tensor container: truncated data");
    DenseSymmetricTensor t(order, dim, std::move(data));
    double scale = 1.0;
    for (double v : t.data())
        scale = std::max(scale, std::abs(v));
    if (!(t.symmetry_defect() <= 1e-12 * scale))
        throw format_error("tensor container: payload is not symmetric");
    return t;
}

inline void save_tensor(const std::filesystem::path& path, const DenseSymmetricTensor& t)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw io_error("cannot open '" + path.string() + "' for writing");
    write_tensor(os, t);
    if (!os)
        throw io_error("failed writing '" + path.string() + "'");
}

inline DenseSymmetricTensor load_tensor(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw io_error("cannot open '" + path.string() + "' for reading");
    return read_tensor(is);
}

inline nlohmann::json vector_to_json(const RealVector& v)
{
    return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

inline RealVector vector_from_json(const nlohmann::json& j)
{
    auto values = j.get<std::vector<double>>();
    return Eigen::Map<const RealVector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

inline nlohmann::json to_json(const FactorEstimate& f)
{
    return {{"iteration", f.iteration},     {"lambda_hat", f.lambda_hat}, {"objective", f.objective},
            {"ascent_iters", f.ascent_iters}, {"converged", f.converged},   {"u_hat", vector_to_json(f.u_hat)}};
}

inline nlohmann::json to_json(const Decomposition& dec, const std::string& method)
{
    nlohmann::json factors = nlohmann::json::array();
    for (const auto& f : dec.factors)
        factors.push_back(to_json(f));
    return {{"method", method},
            {"factors", factors},
            {"singular_values", dec.singular_values},
            {"next_singular_value", dec.next_singular_value},
            {"detected_rank", dec.detected_rank},
            {"warnings", dec.warnings}};
}

inline nlohmann::json to_json(const RankSelectionReport& rep)
{
    nlohmann::json candidates = nlohmann::json::array();
    for (const auto& c : rep.candidates)
        candidates.push_back({{"index", c.index}, {"objective", c.objective}, {"lambda_hat", c.lambda_hat}});
    nlohmann::json scores = nlohmann::json::array();
    for (double s : rep.elbow_scores)
        scores.push_back(std::isfinite(s) ? nlohmann::json(s) : nlohmann::json("inf"));
    return {{"n_relaxed", rep.n_relaxed},         {"candidates", candidates},
            {"filtered_set", rep.filtered_set},   {"sorted_lambda_sq", rep.sorted_lambda_sq},
            {"elbow_scores", scores},             {"r_hat", rep.r_hat},
            {"diagnostics", rep.diagnostics}};
}

inline nlohmann::json instance_sidecar(const Instance& inst)
{
    nlohmann::json factors = nlohmann::json::array();
    for (int i = 0; i < inst.truth.rank(); ++i)
        factors.push_back(vector_to_json(inst.truth.factor(i)));
    return {{"order", inst.tensor.order()},
            {"dim", inst.tensor.dim()},
            {"rank", inst.truth.rank()},
            {"seed", inst.seed},
            {"noise", {{"model", to_string(inst.spec.model)}, {"sigma", inst.spec.sigma}, {"df", inst.spec.df}}},
            {"noise_frob", inst.noise_frob},
            {"noise_spectral_lb", inst.noise_spectral_lb},
            {"weights", inst.truth.weights},
            {"factors", factors}};
}

inline GroundTruth truth_from_sidecar(const nlohmann::json& j)
{
    GroundTruth truth;
    truth.weights = j.at("weights").get<std::vector<double>>();
    const auto& factors = j.at("factors");
    const auto d = static_cast<Eigen::Index>(j.at("dim").get<int>());
    truth.factors.resize(d, static_cast<Eigen::Index>(factors.size()));
    for (std::size_t i = 0; i < factors.size(); ++i) {
        RealVector u = vector_from_json(factors[i]);
        if (u.size() != d)
            throw format_error("sidecar: factor length does not match dim");
        truth.factors.col(static_cast<Eigen::Index>(i)) = u;
    }
    if (truth.weights.size() != factors.size())
        throw format_error("sidecar: weights and factors differ in count");
    return truth;
}

inline void save_json(const std::filesystem::path& path, const nlohmann::json& j)
{
    std::ofstream os(path, std::ios::trunc);
    if (!os)
        throw io_error("cannot open '" + path.string() + "' for writing");
    os << j.dump(2) << '\n';
    if (!os)
        throw io_error("failed writing '" + path.string() + "'");
}

inline nlohmann::json load_json(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw io_error("cannot open '" + path.string() + "' for reading");
    try {
        return nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw format_error("'" + path.string() + "': " + e.what());
    }
}

} // namespace orthotensor
