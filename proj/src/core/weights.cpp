#include "core/weights.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace qsiam {

namespace {

constexpr char kMagic[] = "QSIAM1\n";
constexpr std::size_t kMagicLen = 7;

void put_u32le(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_f32le(std::string& out, float f) {
  std::uint32_t v;
  std::memcpy(&v, &f, 4);
  put_u32le(out, v);
}

std::uint32_t get_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

float get_f32le(const unsigned char* p) {
  const std::uint32_t v = get_u32le(p);
  float f;
  std::memcpy(&f, &v, 4);
  return f;
}

}  // namespace

void save_weights(const WeightContainer& container, const std::string& path) {
  nlohmann::json manifest;
  manifest["format"] = 1;
  manifest["input_scale"] = container.input_scale;

  std::string weight_blob;
  std::string bn_blob;
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& lw : container.layers) {
    nlohmann::json jl;
    jl["name"] = lw.name;
    jl["dims"] = lw.weights.dims;
    jl["weight_bits"] = lw.weights.bits;
    jl["weight_scale"] = lw.weights.scale;
    jl["weight_offset"] = weight_blob.size();
    jl["out_bits"] = lw.out_bits;
    jl["out_scale"] = lw.out_scale;
    weight_blob.append(reinterpret_cast<const char*>(lw.weights.data.data()),
                       lw.weights.data.size());
    if (lw.bn) {
      jl["bn_offset"] = bn_blob.size() / 4;
      for (float v : lw.bn->gamma) put_f32le(bn_blob, v);
      for (float v : lw.bn->beta) put_f32le(bn_blob, v);
      for (float v : lw.bn->mean) put_f32le(bn_blob, v);
      for (float v : lw.bn->stddev) put_f32le(bn_blob, v);
    }
    layers.push_back(jl);
  }
  manifest["layers"] = layers;
  manifest["weight_bytes"] = weight_blob.size();
  manifest["bn_floats"] = bn_blob.size() / 4;

  const std::string text = manifest.dump();  // keys are stored sorted
  std::string file;
  file.append(kMagic, kMagicLen);
  put_u32le(file, static_cast<std::uint32_t>(text.size()));
  file += text;
  file += weight_blob;
  file += bn_blob;

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(file.data(), static_cast<std::streamsize>(file.size()));
  if (!out) throw IoError("short write to '" + path + "'");
}

WeightContainer load_weights(const std::string& path, const NetworkSpec& spec) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open weight container '" + path + "'");
  std::string file((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (file.size() < kMagicLen + 4 || file.compare(0, kMagicLen, kMagic, kMagicLen) != 0)
    throw ContainerError("'" + path + "' is not a weight container (bad magic)");
  const auto* bytes = reinterpret_cast<const unsigned char*>(file.data());
  const std::uint32_t manifest_len = get_u32le(bytes + kMagicLen);
  const std::size_t manifest_off = kMagicLen + 4;
  if (manifest_off + manifest_len > file.size())
    throw ContainerError("manifest length exceeds file size");

  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(file.substr(manifest_off, manifest_len));
  } catch (const std::exception& e) {
    throw ContainerError(std::string("cannot parse manifest: ") + e.what());
  }

  WeightContainer c;
  try {
    if (manifest.at("format").get<int>() != 1)
      throw ContainerError("unsupported container format version");
    c.input_scale = manifest.at("input_scale").get<double>();
    if (!(c.input_scale > 0.0))
      throw ContainerError("input_scale must be positive");

    const std::size_t weight_bytes = manifest.at("weight_bytes").get<std::size_t>();
    const std::size_t bn_floats = manifest.at("bn_floats").get<std::size_t>();
    const std::size_t weight_off = manifest_off + manifest_len;
    const std::size_t bn_off = weight_off + weight_bytes;

    const auto& jlayers = manifest.at("layers");
    if (jlayers.size() != spec.layers.size())
      throw ContainerError("container has " + std::to_string(jlayers.size()) +
                           " layers, network needs " + std::to_string(spec.layers.size()));

    for (std::size_t i = 0; i < jlayers.size(); ++i) {
      const auto& jl = jlayers[i];
      const LayerSpec& ls = spec.layers[i];
      LayerWeights lw;
      lw.name = jl.at("name").get<std::string>();

      const std::vector<int> dims = jl.at("dims").get<std::vector<int>>();
      const std::vector<int> want = {ls.out_channels, ls.in_channels, 3, 3};
      if (dims != want)
        throw ContainerError("layer '" + lw.name + "' has unexpected weight dims");
      const int wbits = jl.at("weight_bits").get<int>();
      if (wbits != ls.weight_bits)
        throw ContainerError("layer '" + lw.name + "' weight bits do not match the network");

      lw.weights = QTensor(dims, wbits, jl.at("weight_scale").get<double>());
      const std::size_t offset = jl.at("weight_offset").get<std::size_t>();
      const std::size_t count = lw.weights.size();
      if (offset + count > weight_bytes || weight_off + offset + count > file.size())
        throw ContainerError("truncated weight blob: tensor of layer '" + lw.name +
                             "' runs past the end");
      std::memcpy(lw.weights.data.data(), file.data() + weight_off + offset, count);
      try {
        lw.weights.validate(lw.name.c_str());
      } catch (const Error& e) {
        throw ContainerError(e.what());
      }

      lw.out_bits = jl.at("out_bits").get<int>();
      lw.out_scale = jl.at("out_scale").get<double>();
      if (lw.out_bits != ls.act_bits.value_or(8))
        throw ContainerError("layer '" + lw.name + "' output bits do not match the network");
      if (!(lw.out_scale > 0.0))
        throw ContainerError("layer '" + lw.name + "' output scale must be positive");

      const bool has_bn = jl.contains("bn_offset");
      if (has_bn != ls.batch_norm)
        throw ContainerError("layer '" + lw.name + "' batch norm presence does not match");
      if (has_bn) {
        const std::size_t bn_at = jl.at("bn_offset").get<std::size_t>();
        const std::size_t C = static_cast<std::size_t>(ls.out_channels);
        if (bn_at + 4 * C > bn_floats || bn_off + (bn_at + 4 * C) * 4 > file.size())
          throw ContainerError("truncated batch norm blob: vectors of layer '" + lw.name +
                               "' run past the end");
        BatchNorm bn;
        bn.gamma.resize(C);
        bn.beta.resize(C);
        bn.mean.resize(C);
        bn.stddev.resize(C);
        const unsigned char* p = bytes + bn_off + bn_at * 4;
        for (std::size_t k = 0; k < C; ++k) bn.gamma[k] = get_f32le(p + 4 * k);
        p += 4 * C;
        for (std::size_t k = 0; k < C; ++k) bn.beta[k] = get_f32le(p + 4 * k);
        p += 4 * C;
        for (std::size_t k = 0; k < C; ++k) bn.mean[k] = get_f32le(p + 4 * k);
        p += 4 * C;
        for (std::size_t k = 0; k < C; ++k) bn.stddev[k] = get_f32le(p + 4 * k);
        for (std::size_t k = 0; k < C; ++k) {
          if (!(bn.stddev[k] > 0.0f))
            throw ContainerError("layer '" + lw.name + "' has non-positive stddev");
          if (!(bn.gamma[k] > 0.0f))
            throw ContainerError("layer '" + lw.name + "' has non-positive gamma");
        }
        lw.bn = std::move(bn);
      }
      c.layers.push_back(std::move(lw));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ContainerError(std::string("malformed manifest: ") + e.what());
  }
  return c;
}

WeightContainer gen_random_weights(const NetworkSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);

  WeightContainer c;
  c.input_scale = 1.0 / 128.0;

  // Random probe inputs drive an empirical calibration of the batch norm
  // statistics so each layer's thresholds spread over the quantizer range.
  const int side = spec.exemplar_size;
  std::vector<QTensor> probes;
  for (int p = 0; p < 2; ++p) {
    QTensor q({spec.input_channels, side, side}, 8, c.input_scale);
    for (auto& v : q.data) v = static_cast<std::int8_t>(rng.uniform_int(-128, 127));
    probes.push_back(std::move(q));
  }

  double cur_scale = c.input_scale;
  for (const LayerSpec& ls : spec.layers) {
    LayerWeights lw;
    lw.name = ls.name;
    lw.weights = QTensor({ls.out_channels, ls.in_channels, 3, 3}, ls.weight_bits,
                         1.0 / (1 << (ls.weight_bits - 1)));
    for (auto& v : lw.weights.data)
      v = static_cast<std::int8_t>(rng.uniform_int(lw.weights.qmin(), lw.weights.qmax()));

    const double acc_scale = lw.weights.scale * cur_scale;
    std::vector<AccTensor> accs;
    accs.reserve(probes.size());
    for (const auto& probe : probes) accs.push_back(conv2d_same(probe, lw.weights));

    const int C = ls.out_channels;
    std::vector<double> mean(C), stddev(C);
    const std::size_t plane = accs[0].size() / static_cast<std::size_t>(C);
    for (int ch = 0; ch < C; ++ch) {
      double s = 0.0, s2 = 0.0;
      for (const auto& acc : accs) {
        const std::int32_t* a = acc.data.data() + static_cast<std::size_t>(ch) * plane;
        for (std::size_t i = 0; i < plane; ++i) {
          const double v = static_cast<double>(a[i]);
          s += v;
          s2 += v * v;
        }
      }
      const double n = static_cast<double>(plane * accs.size());
      const double m = s / n;
      const double var = std::max(0.0, s2 / n - m * m);
      mean[ch] = m * acc_scale;
      stddev[ch] = std::max(std::sqrt(var) * acc_scale, 1e-6);
    }

    if (ls.act_bits) {
      BatchNorm bn;
      bn.gamma.resize(C);
      bn.beta.resize(C);
      bn.mean.resize(C);
      bn.stddev.resize(C);
      for (int ch = 0; ch < C; ++ch) {
        bn.gamma[ch] = static_cast<float>(1.0 + rng.uniform(-0.2, 0.2));
        bn.beta[ch] = static_cast<float>(rng.uniform(-0.3, 0.3));
        bn.mean[ch] = static_cast<float>(mean[ch]);
        bn.stddev[ch] = static_cast<float>(stddev[ch]);
      }
      lw.out_bits = *ls.act_bits;
      lw.out_scale = 4.0 / (1 << lw.out_bits);  // normalized output spans ~2 sigma
      const ThresholdSet set = lower_batchnorm(bn, acc_scale, lw.out_bits, lw.out_scale);
      for (std::size_t p = 0; p < probes.size(); ++p)
        probes[p] = threshold_activate(accs[p], set);
      lw.bn = std::move(bn);
    } else {
      double spread = 0.0;
      for (int ch = 0; ch < C; ++ch)
        spread = std::max(spread, std::abs(mean[ch]) + 2.0 * stddev[ch]);
      if (!(spread > 0.0)) spread = 1.0;
      lw.out_bits = 8;
      lw.out_scale = spread / 100.0;
      for (std::size_t p = 0; p < probes.size(); ++p)
        probes[p] = requantize(accs[p], acc_scale, 8, lw.out_scale);
    }
    if (ls.pool)
      for (auto& probe : probes) probe = maxpool2x2(probe);

    cur_scale = lw.out_scale;
    c.layers.push_back(std::move(lw));
  }
  return c;
}

}  // namespace qsiam
