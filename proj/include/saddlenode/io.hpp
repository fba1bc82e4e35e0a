#pragma once

#include <string>
#include <vector>

namespace saddlenode::io {

/// Locale-independent "%.12g" formatting; all emitted numbers go through this.
std::string fmt(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

struct Series {
    std::string name;
    std::vector<double> x, y;
};

/// Minimal polyline chart; presentation parity with publication figures is
/// not a goal.
void write_svg(const std::string& path, const std::vector<Series>& series,
               const std::string& title);

void ensure_directory(const std::string& dir);

}  // namespace saddlenode::io
