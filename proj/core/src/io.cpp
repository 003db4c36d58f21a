#include "hypertorus/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace hypertorus {

namespace {

constexpr char kFieldMagic[8] = {'H', 'T', 'F', 'I', 'E', 'L', 'D', '1'};
constexpr char kFormMagic[8] = {'H', 'T', 'F', 'O', 'R', 'M', '0', '1'};

template <class T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("field file: truncated");
    return v;
}

void open_failed(const std::string& path) {
    throw std::runtime_error("cannot open '" + path + "'");
}

}  // namespace

void write_field_record(std::ostream& out, const ScalarField& f, bool wide) {
    out.write(kFieldMagic, sizeof(kFieldMagic));
    put<std::int32_t>(out, f.shape().N);
    put<std::int32_t>(out, f.shape().n_slices);
    put<std::uint8_t>(out, f.slab() ? 1 : 0);
    put<std::uint8_t>(out, wide ? 16 : 8);
    for (int i = 0; i < 4; ++i) put<std::int64_t>(out, f.gluing().matrix().m[i]);
    if (wide) {
        out.write(reinterpret_cast<const char*>(f.data().data()),
                  static_cast<std::streamsize>(f.data().size() * sizeof(cplx)));
    } else {
        std::vector<float> buf(f.data().size() * 2);
        for (std::size_t i = 0; i < f.data().size(); ++i) {
            buf[2 * i] = static_cast<float>(f.data()[i].real());
            buf[2 * i + 1] = static_cast<float>(f.data()[i].imag());
        }
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size() * sizeof(float)));
    }
    if (!out) throw std::runtime_error("field file: write failed");
}

ScalarField read_field_record(std::istream& in) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kFieldMagic, sizeof(magic)) != 0)
        throw std::runtime_error("field file: bad magic");
    const auto N = get<std::int32_t>(in);
    const auto n_slices = get<std::int32_t>(in);
    const auto slab = get<std::uint8_t>(in);
    const auto dtype = get<std::uint8_t>(in);
    if (dtype != 16 && dtype != 8) throw std::runtime_error("field file: unknown sample dtype");
    Mat2i A;
    for (int i = 0; i < 4; ++i) A.m[i] = get<std::int64_t>(in);
    if (N < 1 || n_slices < 1 || N > (1 << 20) || n_slices > (1 << 20))
        throw std::runtime_error("field file: implausible grid header");
    const GridShape shape{N, n_slices};
    std::vector<cplx> data(shape.size());
    if (dtype == 16) {
        in.read(reinterpret_cast<char*>(data.data()),
                static_cast<std::streamsize>(data.size() * sizeof(cplx)));
    } else {
        std::vector<float> buf(data.size() * 2);
        in.read(reinterpret_cast<char*>(buf.data()),
                static_cast<std::streamsize>(buf.size() * sizeof(float)));
        for (std::size_t i = 0; i < data.size(); ++i) data[i] = cplx(buf[2 * i], buf[2 * i + 1]);
    }
    if (!in) throw std::runtime_error("field file: truncated samples");
    return ScalarField(HyperbolicGluing::from_matrix(A), shape, slab != 0, std::move(data));
}

void write_field(const std::string& path, const ScalarField& f, bool wide) {
    std::ofstream out(path, std::ios::binary);
    if (!out) open_failed(path);
    write_field_record(out, f, wide);
}

ScalarField read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) open_failed(path);
    return read_field_record(in);
}

void write_form(const std::string& path, const FrameForm& w, bool wide) {
    std::ofstream out(path, std::ios::binary);
    if (!out) open_failed(path);
    out.write(kFormMagic, sizeof(kFormMagic));
    put<std::uint8_t>(out, static_cast<std::uint8_t>(w.degree()));
    for (int i = 0; i < w.n_components(); ++i) write_field_record(out, w.comp(i), wide);
}

FrameForm read_form(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) open_failed(path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kFormMagic, sizeof(magic)) != 0)
        throw std::runtime_error("form file: bad magic");
    const int degree = get<std::uint8_t>(in);
    const int n = component_count(degree);
    std::vector<ScalarField> comps;
    comps.reserve(n);
    for (int i = 0; i < n; ++i) comps.push_back(read_field_record(in));
    return FrameForm(degree, std::move(comps));
}

void write_field_csv(const std::string& path, const ScalarField& f) {
    std::ofstream out(path);
    if (!out) open_failed(path);
    out << "i,j,slice,re,im\n";
    out.precision(17);
    const auto& s = f.shape();
    for (int l = 0; l < s.n_slices; ++l)
        for (int j = 0; j < s.N; ++j)
            for (int i = 0; i < s.N; ++i) {
                const cplx v = f.at(i, j, l);
                out << i << ',' << j << ',' << l << ',' << v.real() << ',' << v.imag() << '\n';
            }
}

}  // namespace hypertorus
