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

#include "leedw/geo/geo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "leedw/common/error.hpp"
#include "leedw/common/http.hpp"
#include "leedw/common/util.hpp"

namespace leedw::geo {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEdgeTolerance = 1e-9;  // degrees

double rad(double deg) { return deg * kPi / 180.0; }

GeoPoint point_from(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("lat") || !j.contains("lon") || !j["lat"].is_number() || !j["lon"].is_number()) {
    throw Error(ErrorCode::validation, where + ": expected {lat, lon}");
  }
  GeoPoint p{j["lat"].get<double>(), j["lon"].get<double>()};
  if (!p.valid()) throw Error(ErrorCode::validation, where + ": coordinates out of range");
  return p;
}

std::vector<GeoPoint> open_ring(const std::vector<GeoPoint>& ring) {
  std::vector<GeoPoint> r = ring;
  if (r.size() > 1 && r.front() == r.back()) r.pop_back();
  return r;
}

double segment_distance(double px, double py, double ax, double ay, double bx, double by) {
  const double dx = bx - ax, dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - (ax + t * dx), py - (ay + t * dy));
}

}  // namespace

double haversine_distance(const GeoPoint& a, const GeoPoint& b) {
  const double dlat = rad(b.lat - a.lat);
  const double dlon = rad(b.lon - a.lon);
  const double s = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(rad(a.lat)) * std::cos(rad(b.lat)) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2 * kEarthRadius * std::asin(std::min(1.0, std::sqrt(s)));
}

void ParcelPolygon::validate() const {
  auto r = open_ring(ring);
  std::vector<GeoPoint> distinct;
  for (const auto& p : r) {
    if (!p.valid()) throw Error(ErrorCode::validation, "parcel " + id + ": vertex out of range");
    if (std::find(distinct.begin(), distinct.end(), p) == distinct.end()) distinct.push_back(p);
  }
  if (distinct.size() < 3) throw Error(ErrorCode::validation, "parcel " + id + ": needs at least 3 distinct vertices");
}

Dataset Dataset::from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::validation, "GIS dataset must be an object");
  Dataset d;
  auto list = [&](const char* key) -> Json {
    if (!j.contains(key)) return Json::array();
    if (!j[key].is_array()) throw Error(ErrorCode::validation, std::string("GIS dataset: ") + key + " must be an array");
    return j[key];
  };
  const Json stops = list("stops");
  for (size_t i = 0; i < stops.size(); ++i) {
    const std::string where = "stops[" + std::to_string(i) + "]";
    const Json& s = stops[i];
    TransitStop t;
    t.id = s.value("id", where);
    t.location = point_from(s.value("location", Json()), where + ".location");
    for (const auto& m : s.value("modes", Json::array())) {
      const std::string mode = m.get<std::string>();
      if (mode != "bus" && mode != "rail") throw Error(ErrorCode::validation, where + ": unknown mode " + mode);
      t.modes.insert(mode);
    }
    const Json trips = s.value("weekday_trips", Json());
    if (trips.is_number()) t.weekday_trips = trips.get<double>();
    else if (auto q = store::as_quantity(trips)) t.weekday_trips = q->value;
    else throw Error(ErrorCode::validation, where + ": weekday_trips missing");
    if (!(t.weekday_trips >= 0)) throw Error(ErrorCode::validation, where + ": weekday_trips must be >= 0");
    d.stops.push_back(std::move(t));
  }
  const Json amenities = list("amenities");
  for (size_t i = 0; i < amenities.size(); ++i) {
    const std::string where = "amenities[" + std::to_string(i) + "]";
    Amenity a;
    a.id = amenities[i].value("id", where);
    a.location = point_from(amenities[i].value("location", Json()), where + ".location");
    a.category = amenities[i].value("category", "");
    if (a.category.empty()) throw Error(ErrorCode::validation, where + ": category must be nonempty");
    d.amenities.push_back(std::move(a));
  }
  const Json parcels = list("parcels");
  for (size_t i = 0; i < parcels.size(); ++i) {
    const std::string where = "parcels[" + std::to_string(i) + "]";
    ParcelPolygon p;
    p.id = parcels[i].value("id", where);
    const Json ring = parcels[i].value("ring", Json::array());
    for (size_t k = 0; k < ring.size(); ++k) p.ring.push_back(point_from(ring[k], where + ".ring[" + std::to_string(k) + "]"));
    const std::string cls = parcels[i].value("classification", "ordinary");
    if (cls == "sensitive") p.classification = ParcelClass::sensitive;
    else if (cls != "ordinary") throw Error(ErrorCode::validation, where + ": unknown classification " + cls);
    p.validate();
    d.parcels.push_back(std::move(p));
  }
  return d;
}

Dataset load_dataset(const std::filesystem::path& file) {
  Json j;
  try {
    j = Json::parse(read_file(file));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::parse, file.string() + ": " + e.what());
  }
  return Dataset::from_json(j);
}

TransitReport transit_score(const GeoPoint& site, const std::vector<TransitStop>& stops, double radius, double min_trips) {
  if (!(radius > 0)) throw Error(ErrorCode::parameter, "transit radius must be > 0");
  TransitReport r;
  for (const auto& s : stops) {
    if (haversine_distance(site, s.location) <= radius) {
      ++r.stops_within;
      r.total_trips += s.weekday_trips;
    }
  }
  r.qualifies = r.total_trips >= min_trips;
  return r;
}

WalkabilityReport walkability_score(const GeoPoint& site, const std::vector<Amenity>& amenities, double radius,
                                    int min_categories) {
  if (!(radius > 0)) throw Error(ErrorCode::parameter, "walkability radius must be > 0");
  WalkabilityReport r;
  for (const auto& a : amenities) {
    if (haversine_distance(site, a.location) <= radius) r.categories.insert(a.category);
  }
  r.qualifies = r.categories_within() >= min_categories;
  return r;
}

std::string_view to_string(Containment c) {
  switch (c) {
    case Containment::inside: return "inside";
    case Containment::outside: return "outside";
    case Containment::boundary: return "boundary";
  }
  return "outside";
}

Containment point_in_polygon(const GeoPoint& p, const ParcelPolygon& poly) {
  poly.validate();
  const auto ring = open_ring(poly.ring);
  const size_t n = ring.size();
  for (size_t i = 0; i < n; ++i) {
    const auto& a = ring[i];
    const auto& b = ring[(i + 1) % n];
    if (segment_distance(p.lon, p.lat, a.lon, a.lat, b.lon, b.lat) <= kEdgeTolerance) return Containment::boundary;
  }
  double lat0 = 0, lon0 = 0;
  for (const auto& v : ring) {
    lat0 += v.lat;
    lon0 += v.lon;
  }
  lat0 /= n;
  lon0 /= n;
  const double k = std::cos(rad(lat0));
  auto px = [&](const GeoPoint& g) { return (g.lon - lon0) * k; };
  auto py = [&](const GeoPoint& g) { return g.lat - lat0; };
  const double x = px(p), y = py(p);
  bool inside = false;
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const double xi = px(ring[i]), yi = py(ring[i]);
    const double xj = px(ring[j]), yj = py(ring[j]);
    if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi) inside = !inside;
  }
  return inside ? Containment::inside : Containment::outside;
}

std::string_view to_string(DataSource s) { return s == DataSource::api ? "api" : "offline_fixture"; }

Json LocationReport::to_json(const LocationParams& params) const {
  Json cats = Json::array();
  for (const auto& c : walkability.categories) cats.push_back(c);
  return {{"transit",
           {{"stops_within", store::quantity(transit.stops_within, "1")},
            {"weekday_trips", store::quantity(transit.total_trips, "1")},
            {"radius", store::quantity(params.transit_radius, "m")},
            {"qualifies", transit.qualifies}}},
          {"walkability",
           {{"categories", store::quantity(walkability.categories_within(), "1")},
            {"category_names", cats},
            {"radius", store::quantity(params.walk_radius, "m")},
            {"qualifies", walkability.qualifies}}},
          {"sensitive_land", sensitive_land ? Json(*sensitive_land) : Json()},
          {"sensitive_parcels", sensitive_parcels},
          {"data_source", to_string(data_source)},
          {"warnings", warnings}};
}

HttpGeoAdapter::HttpGeoAdapter(std::string base_url, std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), timeout_(timeout) {}

Dataset HttpGeoAdapter::fetch(const GeoPoint& site, double radius) {
  std::ostringstream url;
  url << base_url_ << (base_url_.find('?') == std::string::npos ? '?' : '&') << "lat=" << format_number(site.lat)
      << "&lon=" << format_number(site.lon) << "&radius=" << format_number(radius);
  const auto res = http::get(url.str(), timeout_);
  if (res.status >= 500) throw Error(ErrorCode::transient, "GIS API returned HTTP " + std::to_string(res.status));
  if (res.status != 200) throw Error(ErrorCode::protocol, "GIS API returned HTTP " + std::to_string(res.status));
  Json j;
  try {
    j = Json::parse(res.body);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::protocol, std::string("GIS API returned invalid JSON: ") + e.what());
  }
  return Dataset::from_json(j);
}

LocationReport assess_location(const GeoPoint& site, const Dataset* fixture, GeoAdapter* adapter,
                               const LocationParams& params) {
  if (!site.valid()) throw Error(ErrorCode::validation, "site location out of range");
  if (!fixture && !adapter) throw Error(ErrorCode::configuration, "geo needs a GIS fixture or an API adapter");
  LocationReport r;
  Dataset fetched;
  const Dataset* data = nullptr;
  if (adapter) {
    try {
      fetched = adapter->fetch(site, std::max(params.transit_radius, params.walk_radius));
      data = &fetched;
      r.data_source = DataSource::api;
    } catch (const Error& e) {
      if (!fixture || !params.fallback_to_fixture) throw;
      r.warnings.push_back(adapter->name() + " failed (" + e.what() + "); used the offline fixture");
    }
  }
  if (!data) {
    data = fixture;
    r.data_source = DataSource::offline_fixture;
  }
  r.transit = transit_score(site, data->stops, params.transit_radius, params.min_trips);
  r.walkability = walkability_score(site, data->amenities, params.walk_radius, params.min_categories);
  if (!data->parcels.empty()) {
    r.sensitive_land = false;
    for (const auto& p : data->parcels) {
      if (p.classification == ParcelClass::sensitive && point_in_polygon(site, p) != Containment::outside) {
        r.sensitive_land = true;
        r.sensitive_parcels.push_back(p.id);
      }
    }
  }
  return r;
}

Json geo_results(const store::UnifiedStore& store, const GeoOptions& options) {
  const GeoPoint site = store.project().location;
  std::optional<Dataset> fixture;
  if (options.fixture) fixture = load_dataset(*options.fixture);
  const auto report = assess_location(site, fixture ? &*fixture : nullptr, options.adapter.get(), options.params);
  return report.to_json(options.params);
}

}  // namespace leedw::geo
