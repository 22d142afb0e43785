// Copyright (c) 2026 The leedw Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "leedw/datastore/store.hpp"

namespace leedw::geo {

/// Mean Earth radius, meters.
inline constexpr double kEarthRadius = 6371008.8;

/// Great-circle distance in meters.
double haversine_distance(const GeoPoint& a, const GeoPoint& b);

struct TransitStop {
  std::string id;
  GeoPoint location;
  std::set<std::string> modes;  // bus, rail
  double weekday_trips = 0;
};

struct Amenity {
  std::string id;
  GeoPoint location;
  std::string category;
};

enum class ParcelClass { ordinary, sensitive };

struct ParcelPolygon {
  std::string id;
  std::vector<GeoPoint> ring;  // closing vertex optional
  ParcelClass classification = ParcelClass::ordinary;

  /// Throws Error(validation) for fewer than 3 distinct vertices.
  void validate() const;
};

struct Dataset {
  std::vector<TransitStop> stops;
  std::vector<Amenity> amenities;
  std::vector<ParcelPolygon> parcels;

  bool empty() const { return stops.empty() && amenities.empty() && parcels.empty(); }
  /// {stops:[], amenities:[], parcels:[]}; throws Error(validation) on bad records.
  static Dataset from_json(const Json& j);
};

Dataset load_dataset(const std::filesystem::path& file);

struct TransitReport {
  int stops_within = 0;
  double total_trips = 0;
  bool qualifies = false;
};

struct WalkabilityReport {
  std::set<std::string> categories;
  bool qualifies = false;

  int categories_within() const { return static_cast<int>(categories.size()); }
};

/// Stops at distance <= radius count.
TransitReport transit_score(const GeoPoint& site, const std::vector<TransitStop>& stops, double radius, double min_trips);
WalkabilityReport walkability_score(const GeoPoint& site, const std::vector<Amenity>& amenities, double radius,
                                    int min_categories);

enum class Containment { inside, outside, boundary };

std::string_view to_string(Containment c);

/// Even-odd test in a local equirectangular projection about the ring
/// centroid. Points within 1e-9 degrees of an edge are on the boundary.
Containment point_in_polygon(const GeoPoint& p, const ParcelPolygon& poly);

enum class DataSource { api, offline_fixture };

std::string_view to_string(DataSource s);

struct LocationParams {
  double transit_radius = 400;  // m
  double min_trips = 72;
  double walk_radius = 800;     // m
  int min_categories = 4;
  bool fallback_to_fixture = true;
};

struct LocationReport {
  TransitReport transit;
  WalkabilityReport walkability;
  std::optional<bool> sensitive_land;  // nullopt when no parcel data
  std::vector<std::string> sensitive_parcels;
  DataSource data_source = DataSource::offline_fixture;
  std::vector<std::string> warnings;

  /// The $.results.geo subtree; counts are quantities, unknown land is null.
  Json to_json(const LocationParams& params) const;
};

/// Source of GIS records around a site.
class GeoAdapter {
 public:
  virtual ~GeoAdapter() = default;
  virtual std::string name() const = 0;
  virtual Dataset fetch(const GeoPoint& site, double radius) = 0;
};

/// GET <base>?lat=..&lon=..&radius=.. returning the fixture JSON shape.
/// Connection failures and 5xx are transient; other statuses are permanent.
class HttpGeoAdapter : public GeoAdapter {
 public:
  explicit HttpGeoAdapter(std::string base_url, std::chrono::milliseconds timeout = std::chrono::seconds(10));
  std::string name() const override { return "http:" + base_url_; }
  Dataset fetch(const GeoPoint& site, double radius) override;

 private:
  std::string base_url_;
  std::chrono::milliseconds timeout_;
};

/// Uses the adapter when given, falling back to the fixture on adapter
/// failure if params allow. Neither available -> Error(configuration).
LocationReport assess_location(const GeoPoint& site, const Dataset* fixture, GeoAdapter* adapter,
                               const LocationParams& params = {});

struct GeoOptions {
  LocationParams params;
  std::optional<std::filesystem::path> fixture;
  std::shared_ptr<GeoAdapter> adapter;
};

/// The $.results.geo subtree for $.project.location.
Json geo_results(const store::UnifiedStore& store, const GeoOptions& options);

}  // namespace leedw::geo
