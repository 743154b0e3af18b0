#include "csqpt/io.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace csqpt::io {

namespace {

using nlohmann::json;

json matrix_to_re_im(const Matrix& m) {
    json re = json::array(), im = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json rrow = json::array(), irow = json::array();
        for (int j = 0; j < m.cols(); ++j) {
            rrow.push_back(m(i, j).real());
            irow.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rrow));
        im.push_back(std::move(irow));
    }
    return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Matrix matrix_from_re_im(const json& j, int rows, int cols) {
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (static_cast<int>(re.size()) != rows ||
        static_cast<int>(im.size()) != rows)
        throw std::runtime_error("matrix row count mismatch");
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(re[i].size()) != cols ||
            static_cast<int>(im[i].size()) != cols)
            throw std::runtime_error("matrix column count mismatch");
        for (int j2 = 0; j2 < cols; ++j2)
            m(i, j2) = Complex(re[i][j2].get<double>(),
                               im[i][j2].get<double>());
    }
    return m;
}

}  // namespace

std::string density_matrix_to_json(const DensityMatrix& rho) {
    json j = matrix_to_re_im(rho.rho);
    j["n_max"] = rho.dim.n_max;
    j["discarded_tail"] = rho.discarded_tail;
    return j.dump(2) + "\n";
}

DensityMatrix density_matrix_from_json(const std::string& text) {
    json j = json::parse(text);
    FockDim dim{j.at("n_max").get<int>()};
    Matrix m = matrix_from_re_im(j, dim.size(), dim.size());
    double tail = j.value("discarded_tail", 0.0);
    return DensityMatrix{dim, std::move(m), tail};
}

std::string process_tensor_to_json(const ProcessTensor& t) {
    const int d = t.size();
    json elements = json::array();
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n) {
                    Complex e = t(k, l, m, n);
                    elements.push_back(json::array({e.real(), e.imag()}));
                }
    json j{{"n_max", t.dim().n_max}, {"elements", std::move(elements)}};
    return j.dump() + "\n";
}

ProcessTensor process_tensor_from_json(const std::string& text) {
    json j = json::parse(text);
    FockDim dim{j.at("n_max").get<int>()};
    const int d = dim.size();
    const auto& elements = j.at("elements");
    if (static_cast<int>(elements.size()) != d * d * d * d)
        throw std::runtime_error("tensor element count mismatch");
    ProcessTensor t(dim);
    std::size_t idx = 0;
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n, ++idx)
                    t.at(k, l, m, n) =
                        Complex(elements[idx][0].get<double>(),
                                elements[idx][1].get<double>());
    return t;
}

std::string records_to_csv(const std::vector<QuadratureRecord>& records) {
    std::string out = "pulse_id,phase_rad,quadrature\n";
    char line[96];
    for (const auto& r : records) {
        std::snprintf(line, sizeof(line), "%lld,%.17g,%.17g\n",
                      static_cast<long long>(r.pulse_id), r.phase, r.value);
        out += line;
    }
    return out;
}

std::vector<QuadratureRecord> records_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) ||
        line.rfind("pulse_id,phase_rad,quadrature", 0) != 0)
        throw std::runtime_error("bad quadrature CSV header");
    std::vector<QuadratureRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        QuadratureRecord r;
        long long id = 0;
        if (std::sscanf(line.c_str(), "%lld,%lf,%lf", &id, &r.phase,
                        &r.value) != 3)
            throw std::runtime_error("bad quadrature CSV row: " + line);
        r.pulse_id = id;
        records.push_back(r);
    }
    return records;
}

std::string histogram_to_json(const BinnedHistogram& hist) {
    json counts = json::array();
    for (int p = 0; p < hist.counts.rows(); ++p) {
        json row = json::array();
        for (int q = 0; q < hist.counts.cols(); ++q)
            row.push_back(hist.counts(p, q));
        counts.push_back(std::move(row));
    }
    json j{{"phase_edges", hist.phase_edges},
           {"quad_edges", hist.quad_edges},
           {"counts", std::move(counts)},
           {"rejected", hist.rejected}};
    return j.dump() + "\n";
}

BinnedHistogram histogram_from_json(const std::string& text) {
    json j = json::parse(text);
    BinnedHistogram h;
    h.phase_edges = j.at("phase_edges").get<std::vector<double>>();
    h.quad_edges = j.at("quad_edges").get<std::vector<double>>();
    h.rejected = j.value("rejected", 0);
    const auto& counts = j.at("counts");
    const int np = h.phase_bins(), nq = h.quad_bins();
    if (static_cast<int>(counts.size()) != np)
        throw std::runtime_error("histogram count rows mismatch");
    h.counts.resize(np, nq);
    for (int p = 0; p < np; ++p) {
        if (static_cast<int>(counts[p].size()) != nq)
            throw std::runtime_error("histogram count cols mismatch");
        for (int q = 0; q < nq; ++q) h.counts(p, q) = counts[p][q].get<double>();
    }
    return h;
}

std::string signal_power_map_to_json(const SignalPowerMap& map) {
    json points = json::array();
    for (const auto& pt : map) {
        points.push_back(json{{"signal_power_mw", pt.signal_power_mw},
                              {"phase_shift", pt.params.phase_shift},
                              {"transmission", pt.params.transmission},
                              {"excess_noise", pt.params.excess_noise},
                              {"label", pt.params.label}});
    }
    return json{{"points", std::move(points)}}.dump(2) + "\n";
}

SignalPowerMap signal_power_map_from_json(const std::string& text) {
    json j = json::parse(text);
    SignalPowerMap map;
    double prev = -1;
    for (const auto& pt : j.at("points")) {
        SignalPowerPoint p;
        p.signal_power_mw = pt.at("signal_power_mw").get<double>();
        p.params.phase_shift = pt.at("phase_shift").get<double>();
        p.params.transmission = pt.at("transmission").get<double>();
        p.params.excess_noise = pt.value("excess_noise", 0.0);
        p.params.label = pt.value("label", std::string{});
        if (p.signal_power_mw <= prev)
            throw std::runtime_error("signal powers must be strictly increasing");
        prev = p.signal_power_mw;
        map.push_back(std::move(p));
    }
    return map;
}

std::string wigner_to_json(const WignerGrid& grid) {
    json values = json::array();
    for (int i = 0; i < grid.values.rows(); ++i) {
        json row = json::array();
        for (int j2 = 0; j2 < grid.values.cols(); ++j2)
            row.push_back(grid.values(i, j2));
        values.push_back(std::move(row));
    }
    json j{{"x_axis", grid.x_axis},
           {"p_axis", grid.p_axis},
           {"values", std::move(values)}};
    return j.dump() + "\n";
}

std::string phase_slice_to_csv(const PhaseSlice& slice) {
    std::string out = "m,n,value,defined\n";
    char line[96];
    for (int m = 0; m < slice.values.rows(); ++m)
        for (int n = 0; n < slice.values.cols(); ++n) {
            std::snprintf(line, sizeof(line), "%d,%d,%.17g,%d\n", m, n,
                          slice.defined(m, n) ? slice.values(m, n) : 0.0,
                          slice.defined(m, n) ? 1 : 0);
            out += line;
        }
    return out;
}

ProbeSet probe_set_from_manifest(const std::string& text,
                                 const std::filesystem::path& base_dir) {
    json j = json::parse(text);
    ProbeSet set;
    set.eta = j.value("eta", 1.0);
    for (const auto& pj : j.at("probes")) {
        Probe probe;
        probe.alpha = CoherentAmplitude{
            Complex(pj.at("alpha_re").get<double>(),
                    pj.value("alpha_im", 0.0))};
        auto out_path = base_dir / pj.at("output_hist_path").get<std::string>();
        probe.output_hist = histogram_from_json(read_file(out_path));
        if (pj.contains("input_hist_path") &&
            !pj["input_hist_path"].is_null()) {
            auto in_path =
                base_dir / pj["input_hist_path"].get<std::string>();
            probe.input_hist = histogram_from_json(read_file(in_path));
        }
        set.probes.push_back(std::move(probe));
    }
    return set;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("short write to " + path.string());
}

namespace {

// SHA-256 (FIPS 180-4), compact single-block-loop implementation.
struct Sha256 {
    std::array<std::uint32_t, 8> h{0x6a09e667u, 0xbb67ae85u, 0x3c6ef372u,
                                   0xa54ff53au, 0x510e527fu, 0x9b05688cu,
                                   0x1f83d9abu, 0x5be0cd19u};
    static constexpr std::array<std::uint32_t, 64> k{
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b,
        0x59f111f1, 0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01,
        0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7,
        0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc,
        0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152,
        0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
        0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
        0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
        0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819,
        0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116, 0x1e376c08,
        0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f,
        0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
        0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

    static std::uint32_t rotr(std::uint32_t x, int n) {
        return (x >> n) | (x << (32 - n));
    }

    void block(const unsigned char* p) {
        std::uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = (std::uint32_t(p[4 * i]) << 24) |
                   (std::uint32_t(p[4 * i + 1]) << 16) |
                   (std::uint32_t(p[4 * i + 2]) << 8) |
                   std::uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^
                               (w[i - 15] >> 3);
            std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^
                               (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        auto a = h;
        for (int i = 0; i < 64; ++i) {
            std::uint32_t s1 =
                rotr(a[4], 6) ^ rotr(a[4], 11) ^ rotr(a[4], 25);
            std::uint32_t ch = (a[4] & a[5]) ^ (~a[4] & a[6]);
            std::uint32_t t1 = a[7] + s1 + ch + k[i] + w[i];
            std::uint32_t s0 =
                rotr(a[0], 2) ^ rotr(a[0], 13) ^ rotr(a[0], 22);
            std::uint32_t maj =
                (a[0] & a[1]) ^ (a[0] & a[2]) ^ (a[1] & a[2]);
            std::uint32_t t2 = s0 + maj;
            a[7] = a[6];
            a[6] = a[5];
            a[5] = a[4];
            a[4] = a[3] + t1;
            a[3] = a[2];
            a[2] = a[1];
            a[1] = a[0];
            a[0] = t1 + t2;
        }
        for (int i = 0; i < 8; ++i) h[i] += a[i];
    }
};

}  // namespace

std::string sha256_hex(const std::string& data) {
    Sha256 ctx;
    const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
    std::size_t n = data.size();
    std::size_t i = 0;
    for (; i + 64 <= n; i += 64) ctx.block(bytes + i);
    unsigned char tail[128] = {0};
    std::size_t rest = n - i;
    std::memcpy(tail, bytes + i, rest);
    tail[rest] = 0x80;
    std::size_t pad_len = (rest < 56) ? 64 : 128;
    std::uint64_t bit_len = std::uint64_t(n) * 8;
    for (int b = 0; b < 8; ++b)
        tail[pad_len - 1 - b] = static_cast<unsigned char>(bit_len >> (8 * b));
    ctx.block(tail);
    if (pad_len == 128) ctx.block(tail + 64);
    char hex[65];
    for (int w = 0; w < 8; ++w)
        std::snprintf(hex + 8 * w, 9, "%08x", ctx.h[w]);
    return std::string(hex, 64);
}

}  // namespace csqpt::io
