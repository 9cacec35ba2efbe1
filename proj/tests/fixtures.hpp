#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "urbanlens/config.hpp"
#include "urbanlens/geo.hpp"
#include "urbanlens/workspace.hpp"

namespace fixtures {

inline const urbanlens::GeoPoint kOrigin{-23.55, -46.63};

/// Geographic point at planar offset (x, y) meters from kOrigin.
urbanlens::GeoPoint at(double x, double y);

/// Axis-aligned rectangle given in planar meters around kOrigin.
urbanlens::Polygon rect(double x0, double y0, double x1, double y1);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  void write(const std::string& name, const std::string& text) const;

 private:
  std::filesystem::path path_;
};

/// Config tuned for the small sample city.
urbanlens::Config small_config();

/// Small sample city taken through every pipeline stage up to `last`.
urbanlens::Workspace small_workspace(urbanlens::Stage last = urbanlens::Stage::analyzed);

}  // namespace fixtures
