#include "stsim/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace stsim {

namespace {

constexpr char kMagic[4] = {'C', 'S', 'I', 'M'};
constexpr std::uint32_t kVersion = 1;

void write_u32_le(std::ostream& out, std::uint32_t u) {
    char buf[4] = {static_cast<char>(u & 0xff), static_cast<char>((u >> 8) & 0xff),
                   static_cast<char>((u >> 16) & 0xff), static_cast<char>((u >> 24) & 0xff)};
    out.write(buf, 4);
}

std::uint32_t read_u32_le(std::istream& in, const std::string& path) {
    unsigned char buf[4];
    if (!in.read(reinterpret_cast<char*>(buf), 4))
        throw data_error(path + ": truncated checkpoint");
    return static_cast<std::uint32_t>(buf[0]) | (static_cast<std::uint32_t>(buf[1]) << 8) |
           (static_cast<std::uint32_t>(buf[2]) << 16) |
           (static_cast<std::uint32_t>(buf[3]) << 24);
}

void write_f64_le(std::ostream& out, double x) {
    std::uint64_t u = std::bit_cast<std::uint64_t>(x);
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((u >> (8 * i)) & 0xff);
    out.write(buf, 8);
}

double read_f64_le(std::istream& in, const std::string& path) {
    unsigned char buf[8];
    if (!in.read(reinterpret_cast<char*>(buf), 8))
        throw data_error(path + ": truncated checkpoint");
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return std::bit_cast<double>(u);
}

std::uint64_t header_value(const std::string& header, const std::string& key,
                           const std::string& path) {
    std::istringstream lines(header);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.rfind(key + "=", 0) == 0) {
            const std::string v = line.substr(key.size() + 1);
            try {
                return std::stoull(v);
            } catch (const std::exception&) {
                throw data_error(path + ": bad header value for '" + key + "'");
            }
        }
    }
    throw data_error(path + ": header is missing key '" + key + "'");
}

std::string header_text(const std::string& header, const std::string& key) {
    std::istringstream lines(header);
    std::string line;
    while (std::getline(lines, line))
        if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
    return {};
}

}  // namespace

void save_checkpoint(const SiameseModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write checkpoint '" + path + "'");

    out.write(kMagic, 4);
    write_u32_le(out, kVersion);

    std::ostringstream header;
    header << "k=" << model.hp.embedding_dim << '\n'
           << "d=" << model.hp.n_filters << '\n'
           << "l=" << model.hp.window << '\n'
           << "h=" << model.hp.hidden_dim << '\n'
           << "seed=" << model.hp.seed << '\n'
           << "embedding=" << model.hp.embedding_id << '\n';
    const std::string header_str = header.str();
    write_u32_le(out, static_cast<std::uint32_t>(header_str.size()));
    out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));

    SiameseModel& mutable_model = const_cast<SiameseModel&>(model);
    for (const ParamView& view : param_views(mutable_model))
        for (double x : view.values) write_f64_le(out, x);
    if (!out) throw data_error("write failed for '" + path + "'");
}

SiameseModel load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open checkpoint '" + path + "'");

    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw data_error(path + ": not a checkpoint file (magic mismatch)");
    const std::uint32_t version = read_u32_le(in, path);
    if (version != kVersion)
        throw data_error(path + ": unsupported checkpoint version " + std::to_string(version));

    const std::uint32_t header_len = read_u32_le(in, path);
    std::string header(header_len, '\0');
    if (!in.read(header.data(), header_len)) throw data_error(path + ": truncated checkpoint");

    ModelHyperparams hp;
    hp.embedding_dim = header_value(header, "k", path);
    hp.n_filters = header_value(header, "d", path);
    hp.window = header_value(header, "l", path);
    hp.hidden_dim = header_value(header, "h", path);
    hp.seed = header_value(header, "seed", path);
    hp.embedding_id = header_text(header, "embedding");
    if (hp.embedding_dim == 0 || hp.n_filters == 0 || hp.hidden_dim == 0 || hp.window == 0 ||
        hp.window % 2 == 0)
        throw data_error(path + ": invalid dimensions in header");

    SiameseModel model;
    model.hp = hp;
    model.bank = make_filter_bank(hp.window, hp.embedding_dim, hp.n_filters);
    model.lstm = make_lstm(hp.fused_dim(), hp.hidden_dim);
    for (const ParamView& view : param_views(model))
        for (double& x : view.values) x = read_f64_le(in, path);

    // Nothing may follow the declared payload.
    char extra;
    if (in.read(&extra, 1))
        throw data_error(path + ": payload longer than the header declares");
    return model;
}

}  // namespace stsim
