#include "wilson/io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace wilson {

namespace {

void put_f64(std::ostream& out, double v)
{
    const auto bits = std::bit_cast<std::uint64_t>(v);
    std::array<char, 8> bytes{};
    for (int i = 0; i < 8; ++i)
        bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
    out.write(bytes.data(), bytes.size());
}

double get_f64(std::istream& in)
{
    std::array<unsigned char, 8> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (in.gcount() != 8)
        throw Error("truncated binary payload");
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i)
        bits = (bits << 8) | bytes[i];
    return std::bit_cast<double>(bits);
}

void put_matrix(std::ostream& out, const Eigen::Ref<const CMatrix>& m)
{
    for (index_t row = 0; row < m.rows(); ++row)
        for (index_t col = 0; col < m.cols(); ++col) {
            put_f64(out, m(row, col).real());
            put_f64(out, m(row, col).imag());
        }
}

CMatrix get_matrix(std::istream& in, index_t n)
{
    CMatrix m(n, n);
    for (index_t row = 0; row < n; ++row)
        for (index_t col = 0; col < n; ++col) {
            const double re = get_f64(in);
            const double im = get_f64(in);
            m(row, col) = cplx{re, im};
        }
    return m;
}

std::string one_line(const std::string& comment)
{
    std::string s = comment;
    for (char& c : s)
        if (c == '\n' || c == '\r')
            c = ' ';
    return s;
}

void write_header(std::ostream& out, const char* magic, const std::string& dims, const std::string& comment)
{
    out << magic << '\n' << dims << '\n' << "# " << one_line(comment) << '\n';
}

// Returns the whitespace-separated integers on the dimension line.
std::vector<long> read_header(std::istream& in, const char* magic, std::size_t count)
{
    std::string line;
    if (!std::getline(in, line) || line != magic)
        throw Error(std::string("not a ") + magic + " file (bad magic)");
    if (!std::getline(in, line))
        throw Error(std::string(magic) + ": missing dimension line");
    std::istringstream dims(line);
    std::vector<long> values;
    long v = 0;
    while (dims >> v)
        values.push_back(v);
    if (values.size() != count || !dims.eof())
        throw Error(std::string(magic) + ": malformed dimension line '" + line + "'");
    if (!std::getline(in, line) || line.empty() || line[0] != '#')
        throw Error(std::string(magic) + ": missing comment line");
    return values;
}

void expect_end(std::istream& in, const char* magic)
{
    if (in.peek() != std::char_traits<char>::eof())
        throw Error(std::string(magic) + ": trailing data after payload");
}

bool is_unitary(const CMatrix& u, double tol)
{
    return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

} // namespace

void write_wgf1(std::ostream& out, const GaugeField& f, const std::string& comment)
{
    const auto& g = f.geometry();
    write_header(out, "WGF1",
                 std::to_string(g.dim()) + " " + std::to_string(g.extent()) + " " + std::to_string(f.rank()),
                 comment);
    for (index_t x = 0; x < g.num_sites(); ++x)
        for (int j = 0; j < g.dim(); ++j)
            put_matrix(out, f.link(x, j));
    if (!out)
        throw Error("WGF1: write failed");
}

GaugeField read_wgf1(std::istream& in)
{
    const auto dims = read_header(in, "WGF1", 3);
    if (dims[0] < 1 || dims[0] > 16 || dims[1] < 2 || dims[2] < 1 || dims[2] > 64)
        throw Error("WGF1: dimensions out of range");
    GaugeField f(make_geometry(static_cast<int>(dims[0]), static_cast<int>(dims[1])), static_cast<int>(dims[2]));
    const auto& g = f.geometry();
    for (index_t x = 0; x < g.num_sites(); ++x)
        for (int j = 0; j < g.dim(); ++j) {
            CMatrix u = get_matrix(in, f.rank());
            if (!is_unitary(u, kLoadUnitarityTol))
                throw Error("WGF1: link at site " + std::to_string(x) + ", direction " + std::to_string(j) +
                            " is not unitary");
            f.link(x, j) = u;
        }
    expect_end(in, "WGF1");
    return f;
}

void save_gauge_field(const std::filesystem::path& path, const GaugeField& f, const std::string& comment)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open " + path.string() + " for writing");
    write_wgf1(out, f, comment);
}

GaugeField load_gauge_field(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    return read_wgf1(in);
}

void write_wut1(std::ostream& out, const UnitaryTuple& t, const std::string& comment)
{
    write_header(out, "WUT1", std::to_string(t.d) + " " + std::to_string(t.n), comment);
    for (const auto& u : t.unitaries)
        put_matrix(out, u);
    if (!out)
        throw Error("WUT1: write failed");
}

UnitaryTuple read_wut1(std::istream& in)
{
    const auto dims = read_header(in, "WUT1", 2);
    if (dims[0] < 1 || dims[0] > 16 || dims[1] < 1 || dims[1] > 1 << 15)
        throw Error("WUT1: dimensions out of range");
    std::vector<CMatrix> mats;
    for (long j = 0; j < dims[0]; ++j) {
        CMatrix u = get_matrix(in, dims[1]);
        if (!is_unitary(u, kLoadUnitarityTol))
            throw Error("WUT1: matrix " + std::to_string(j) + " is not unitary");
        mats.push_back(std::move(u));
    }
    expect_end(in, "WUT1");
    return make_unitary_tuple(std::move(mats), kLoadUnitarityTol);
}

void save_unitary_tuple(const std::filesystem::path& path, const UnitaryTuple& t, const std::string& comment)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open " + path.string() + " for writing");
    write_wut1(out, t, comment);
}

UnitaryTuple load_unitary_tuple(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    return read_wut1(in);
}

} // namespace wilson
