#include "bathlab/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace bathlab {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char magic[4] = {'B', 'L', 'C', 'K'};
constexpr std::uint32_t version = 1;

std::uint64_t fnv1a(const std::vector<char>& bytes, std::size_t count)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (std::size_t i = 0; i < count; ++i) {
        h ^= static_cast<unsigned char>(bytes[i]);
        h *= 1099511628211ULL;
    }
    return h;
}

template <class T>
void put(std::vector<char>& buf, const T& value)
{
    const auto* p = reinterpret_cast<const char*>(&value);
    buf.insert(buf.end(), p, p + sizeof(T));
}

class Reader {
public:
    explicit Reader(const std::vector<char>& buf) : buf_(buf) {}
    template <class T>
    T get()
    {
        if (pos_ + sizeof(T) > buf_.size())
            throw ConfigError("checkpoint truncated");
        T value;
        std::memcpy(&value, buf_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return value;
    }
    std::size_t position() const { return pos_; }

private:
    const std::vector<char>& buf_;
    std::size_t pos_ = 0;
};

} // namespace

void save_checkpoint(const std::filesystem::path& path, const CheckpointHeader& header, const DistributionState& state)
{
    std::vector<char> buf(magic, magic + 4);
    put(buf, version);
    put(buf, header.extent);
    put(buf, static_cast<std::int32_t>(header.points_per_axis));
    put(buf, static_cast<std::int32_t>(header.max_mode));
    put(buf, header.dt);
    put(buf, state.step);
    put(buf, state.time);
    put(buf, state.c_infinity);
    put(buf, static_cast<std::uint64_t>(state.coeff.rows()));
    put(buf, static_cast<std::uint64_t>(state.coeff.cols()));
    const auto* data = reinterpret_cast<const char*>(state.coeff.data());
    buf.insert(buf.end(), data, data + state.coeff.size() * sizeof(cplx));
    put(buf, fnv1a(buf, buf.size()));

    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw NumericalError("cannot write checkpoint " + tmp.string());
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (!out)
            throw NumericalError("short write on checkpoint " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read checkpoint " + path.string());
    const std::vector<char> buf{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (buf.size() < 4 || std::memcmp(buf.data(), magic, 4) != 0)
        throw ConfigError("not a checkpoint file: " + path.string());

    Reader r(buf);
    for (int i = 0; i < 4; ++i)
        r.get<char>();
    if (r.get<std::uint32_t>() != version)
        throw ConfigError("unsupported checkpoint version");
    Checkpoint c;
    c.header.extent = r.get<double>();
    c.header.points_per_axis = r.get<std::int32_t>();
    c.header.max_mode = r.get<std::int32_t>();
    c.header.dt = r.get<double>();
    c.state.step = r.get<std::uint64_t>();
    c.state.time = r.get<double>();
    c.state.c_infinity = r.get<double>();
    const auto rows = r.get<std::uint64_t>();
    const auto cols = r.get<std::uint64_t>();
    const std::size_t payload = rows * cols * sizeof(cplx);
    if (rows > (1ULL << 32) || cols > (1ULL << 32) || r.position() + payload + 8 != buf.size())
        throw ConfigError("checkpoint size does not match its header");
    c.state.coeff.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    std::memcpy(c.state.coeff.data(), buf.data() + r.position(), payload);
    std::uint64_t stored = 0;
    std::memcpy(&stored, buf.data() + r.position() + payload, 8);
    if (stored != fnv1a(buf, buf.size() - 8))
        throw ConfigError("checkpoint checksum mismatch");
    return c;
}

} // namespace bathlab
