#pragma once
#include <string>
#include <vector>

#include "apc/bohr.hpp"

namespace apc {

// `group N1 .. Nr` (coordinates in [0, N_i)) or `box N1 .. Nr` (coordinates in [1, N_i]).
struct SetFile {
    std::string kind = "group";
    std::vector<long long> dims;
    std::vector<Point> points;   // file order
};

struct DensityFile {
    std::vector<long long> dims;
    std::vector<Point> coords;
    std::vector<Rational> values;
};

// One `x_coords -> y_coords` pair per line, coordinates tab-separated.
struct MapFile {
    std::vector<Point> x, y;
};

// Parse errors are ApcError(Usage) with "name:line:col: message".
SetFile parse_set(const std::string& text, const std::string& name = "<input>");
std::string format_set(const SetFile& s);
SetFile load_set(const std::string& path);
void save_set(const SetFile& s, const std::string& path);

DensityFile parse_density(const std::string& text, const std::string& name = "<input>");
std::string format_density(const DensityFile& d);
DensityFile load_density(const std::string& path);

MapFile parse_map(const std::string& text, const std::string& name = "<input>");
std::string format_map(const MapFile& m);
MapFile load_map(const std::string& path);

GroupSpec set_group(const SetFile& s);
Subset set_subset(const GroupSpec& G, const SetFile& s);
SetFile group_set(const GroupSpec& G, const Subset& A);
SetFile box_set(long long N, const std::vector<long long>& A);
// `p/q`, integer, or decimal with optional exponent, read exactly.
Rational parse_rational(const std::string& tok);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace apc
