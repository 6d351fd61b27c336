#include "machslab/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace machslab {

namespace {

constexpr char kMagic[5] = {'M', 'S', 'L', 'B', '1'};

template <class T>
void put(std::ostream& os, T v) {
    static_assert(sizeof(T) == 8);
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    os.write(reinterpret_cast<const char*>(&bits), 8);
}

template <class T>
T get(std::istream& is, const std::string& path) {
    std::uint64_t bits;
    if (!is.read(reinterpret_cast<char*>(&bits), 8)) throw IoError("truncated checkpoint '" + path + "'");
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    T v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

void write_checkpoint(const std::string& path, const Checkpoint& cp) {
    require(cp.grid != nullptr, "checkpoint: missing grid");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open checkpoint '" + path + "' for writing");
    const auto& g = *cp.grid;
    os.write(kMagic, 5);
    put<std::int64_t>(os, g.dim());
    for (int a = 0; a < g.dim() - 1; ++a) put<std::int64_t>(os, g.n_tangential(a));
    put<std::int64_t>(os, g.n_normal());
    put<double>(os, g.period());
    put<std::int64_t>(os, static_cast<std::int64_t>(cp.fields.size()));
    put<std::int64_t>(os, static_cast<std::int64_t>(cp.aux.size()));
    for (double a : cp.aux) put<double>(os, a);
    for (const auto& f : cp.fields) {
        require(f.size() == g.size(), "checkpoint: field size mismatch");
        for (std::size_t i = 0; i < f.size(); ++i) put<double>(os, f[i]);
    }
    if (!os) throw IoError("write failed for checkpoint '" + path + "'");
}

Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open checkpoint '" + path + "'");
    char magic[5];
    if (!is.read(magic, 5) || std::memcmp(magic, kMagic, 5) != 0)
        throw IoError("'" + path + "' is not an MSLB1 checkpoint");
    const auto dim = get<std::int64_t>(is, path);
    if (dim != 2 && dim != 3) throw IoError("checkpoint '" + path + "': bad dim");
    std::vector<int> nt;
    for (int a = 0; a < dim - 1; ++a) nt.push_back(static_cast<int>(get<std::int64_t>(is, path)));
    const auto nn = get<std::int64_t>(is, path);
    const auto period = get<double>(is, path);
    const auto nf = get<std::int64_t>(is, path);
    const auto na = get<std::int64_t>(is, path);
    if (nf < 0 || nf > 64 || na < 0 || na > 1024) throw IoError("checkpoint '" + path + "': corrupt header");
    Checkpoint cp;
    try {
        cp.grid = SlabGrid::build(static_cast<int>(dim), nt, static_cast<int>(nn), period);
    } catch (const InvalidArgument& e) {
        throw IoError("checkpoint '" + path + "': " + e.what());
    }
    for (std::int64_t i = 0; i < na; ++i) cp.aux.push_back(get<double>(is, path));
    for (std::int64_t k = 0; k < nf; ++k) {
        Field f(cp.grid);
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = get<double>(is, path);
        cp.fields.push_back(std::move(f));
    }
    return cp;
}

}  // namespace machslab
