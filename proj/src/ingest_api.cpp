#include <sstream>

#include <httplib.h>

#include "fmros/ingest.hpp"
#include "fmros/util/csv.hpp"

namespace fmros {

namespace detail {
std::vector<StationSeries> stations_from_json_text(const std::string& body,
                                                   const std::string& source_desc,
                                                   const BBox& bbox, const TimeRange& range,
                                                   const QcConfig& qc, QcReport& report);
}

namespace {

struct ParsedUrl {
  std::string scheme_host;  // "http://host:port"
  std::string path;         // "/stations/timeseries"
};

ParsedUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw IngestError(IngestError::Code::malformed, "bad API url: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::vector<StationSeries> load_stations_api(const std::string& url, const std::string& token,
                                             const BBox& bbox, const TimeRange& range,
                                             const QcConfig& qc, QcReport& report) {
  const ParsedUrl parsed = split_url(url);

  std::ostringstream query;
  query << parsed.path << "?bbox=" << csv::format_double(bbox.min_lat) << ','
        << csv::format_double(bbox.min_lon) << ',' << csv::format_double(bbox.max_lat) << ','
        << csv::format_double(bbox.max_lon) << "&start=" << format_iso8601(range.begin)
        << "&end=" << format_iso8601(range.end);
  if (!token.empty()) query << "&token=" << token;

  httplib::Client client(parsed.scheme_host);
  client.set_connection_timeout(10);
  client.set_read_timeout(60);
  auto res = client.Get(query.str());
  if (!res)
    throw IngestError(IngestError::Code::unreachable,
                      "API unreachable: " + url + " (" + httplib::to_string(res.error()) + ")");
  if (res->status != 200)
    throw IngestError(IngestError::Code::unreachable,
                      "API error: " + url + " returned status " + std::to_string(res->status));
  return detail::stations_from_json_text(res->body, url, bbox, range, qc, report);
}

}  // namespace fmros
