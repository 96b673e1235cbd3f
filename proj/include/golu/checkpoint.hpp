#pragma once

// Binary checkpoint of a MicroNet:
//
//   "GOLUCKPT"                       8 bytes
//   header length                    u64, little endian
//   header                           UTF-8 JSON: format version, sample shape, layer specs
//   parameter count                  u64
//   parameters                       f64 each, little endian
//   buffer count                     u64
//   buffers                          f64 each (batchnorm running mean/var)

#include <golu/activation.hpp>
#include <golu/errors.hpp>
#include <golu/micronet.hpp>

#include <nlohmann/json.hpp>

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace golu {

inline constexpr std::array<char, 8> kCheckpointMagic{'G', 'O', 'L', 'U', 'C', 'K', 'P', 'T'};
inline constexpr int kCheckpointVersion = 1;

namespace ckpt_detail {

inline void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) {
        b[i] = static_cast<unsigned char>(v >> (8 * i));
    }
    os.write(reinterpret_cast<const char*>(b), 8);
}

inline std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) {
        throw DataError("checkpoint: truncated file");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    }
    return v;
}

inline void put_doubles(std::ostream& os, const std::vector<double>& v) {
    put_u64(os, v.size());
    for (double d : v) {
        put_u64(os, std::bit_cast<std::uint64_t>(d));
    }
}

inline std::vector<double> get_doubles(std::istream& is, std::size_t expected, const char* what) {
    const std::uint64_t n = get_u64(is);
    if (n != expected) {
        throw DataError(std::string("checkpoint: ") + what + " count " + std::to_string(n) +
                        " does not match the layer specs (" + std::to_string(expected) + ")");
    }
    std::vector<double> v(n);
    for (auto& d : v) {
        d = std::bit_cast<double>(get_u64(is));
    }
    return v;
}

} // namespace ckpt_detail

inline nlohmann::json activation_to_json(const ActivationKind& k) {
    nlohmann::json j{{"name", activation_name(k.tag())}};
    if (k.tag() == ActivationTag::LeakyReLU) {
        j["slope"] = k.leaky_slope();
    } else if (k.tag() == ActivationTag::ELU) {
        j["alpha"] = k.elu_alpha();
    }
    return j;
}

inline ActivationKind activation_from_json(const nlohmann::json& j) {
    const std::string name = j.at("name").get<std::string>();
    const auto parsed = parse_activation(name);
    if (!parsed) {
        throw DataError("checkpoint: unknown activation '" + name + "'");
    }
    const ActivationTag tag = parsed->tag();
    if (tag == ActivationTag::LeakyReLU) {
        return ActivationKind::leaky_relu(j.value("slope", 0.01));
    }
    if (tag == ActivationTag::ELU) {
        return ActivationKind::elu(j.value("alpha", 1.0));
    }
    return *parsed;
}

inline nlohmann::json layer_to_json(const LayerSpec& layer) {
    return std::visit(
        [](const auto& s) -> nlohmann::json {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, DenseSpec>) {
                return {{"type", "dense"}, {"in", s.in}, {"out", s.out}};
            } else if constexpr (std::is_same_v<S, Conv3x3Spec>) {
                return {{"type", "conv3x3"}, {"in_channels", s.in_channels}, {"out_channels", s.out_channels}};
            } else if constexpr (std::is_same_v<S, BatchNormSpec>) {
                return {{"type", "batchnorm"}, {"features", s.features}, {"eps", s.eps}, {"momentum", s.momentum}};
            } else {
                return {{"type", "act"}, {"activation", activation_to_json(s.kind)}};
            }
        },
        layer);
}

inline LayerSpec layer_from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "dense") {
        return DenseSpec{j.at("in").get<std::size_t>(), j.at("out").get<std::size_t>()};
    }
    if (type == "conv3x3") {
        return Conv3x3Spec{j.at("in_channels").get<std::size_t>(), j.at("out_channels").get<std::size_t>()};
    }
    if (type == "batchnorm") {
        return BatchNormSpec{j.at("features").get<std::size_t>(), j.value("eps", 1e-5), j.value("momentum", 0.1)};
    }
    if (type == "act") {
        return ActSpec{activation_from_json(j.at("activation"))};
    }
    throw DataError("checkpoint: unknown layer type '" + type + "'");
}

inline void save_checkpoint(std::ostream& os, const MicroNet& net) {
    nlohmann::json header{{"format", "golu-micronet"}, {"version", kCheckpointVersion}};
    header["sample_shape"] = net.sample_shape();
    header["layers"] = nlohmann::json::array();
    for (const auto& l : net.layers()) {
        header["layers"].push_back(layer_to_json(l));
    }
    const std::string text = header.dump();
    os.write(kCheckpointMagic.data(), kCheckpointMagic.size());
    ckpt_detail::put_u64(os, text.size());
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    ckpt_detail::put_doubles(os, net.params());
    ckpt_detail::put_doubles(os, net.buffers());
    if (!os) {
        throw Error("checkpoint: write failed");
    }
}

/// Throws DataError on a malformed or inconsistent file.
inline MicroNet load_checkpoint(std::istream& is) {
    std::array<char, 8> magic{};
    if (!is.read(magic.data(), magic.size()) || magic != kCheckpointMagic) {
        throw DataError("checkpoint: bad magic");
    }
    const std::uint64_t len = ckpt_detail::get_u64(is);
    if (len > (std::uint64_t{1} << 30)) {
        throw DataError("checkpoint: header too large");
    }
    std::string text(len, '\0');
    if (!is.read(text.data(), static_cast<std::streamsize>(len))) {
        throw DataError("checkpoint: truncated header");
    }
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("checkpoint: header is not JSON: ") + e.what());
    }
    if (header.value("version", 0) != kCheckpointVersion) {
        throw DataError("checkpoint: unsupported version");
    }
    std::vector<LayerSpec> layers;
    try {
        for (const auto& l : header.at("layers")) {
            layers.push_back(layer_from_json(l));
        }
        MicroNet net(std::move(layers), header.at("sample_shape").get<Shape>());
        net.params() = ckpt_detail::get_doubles(is, net.param_count(), "parameter");
        net.buffers() = ckpt_detail::get_doubles(is, net.buffers().size(), "buffer");
        net.set_mode(Mode::Eval);
        return net;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("checkpoint: malformed header: ") + e.what());
    } catch (const UsageError& e) {
        throw DataError(std::string("checkpoint: inconsistent layer specs: ") + e.what());
    }
}

inline void save_checkpoint(const std::string& path, const MicroNet& net) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw Error("checkpoint: cannot open '" + path + "' for writing");
    }
    save_checkpoint(os, net);
}

inline MicroNet load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw DataError("checkpoint: cannot open '" + path + "'");
    }
    return load_checkpoint(is);
}

} // namespace golu
