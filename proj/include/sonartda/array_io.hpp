#pragma once

#include <string>

#include "sonartda/types.hpp"

namespace sonartda {

// Reads a lab-style echo array: rows become circle look angles, columns
// become channels.  Two formats are accepted, chosen by extension:
//   *.csv            header row required; plain numeric columns are real
//                    channels, re*/im* column pairs are complex channels
//   *.bin / *.json   little-endian 32-bit float payload, row-major, with a
//                    JSON sidecar {rows, cols, dtype: "f32"|"c64",
//                    angular_units: "deg", range_bin_m}; "c64" payloads
//                    interleave (re, im) pairs
// Shape mismatches, non-finite values and malformed cells raise errors
// naming the offending row/column or byte offset.
SignalMap ingest_array(const std::string& path);

// Writers for the same two formats.  CSV stores full doubles and
// round-trips bit-exactly; the binary payload stores 32-bit floats, so it
// round-trips bit-exactly precisely when the samples are already
// f32-representable.  write_array_binary writes `payload_path` and a
// sidecar next to it with the extension swapped to .json.
void write_array_csv(const SignalMap& map, const std::string& path);
void write_array_binary(const SignalMap& map, const std::string& payload_path,
                        double range_bin_m = 0.0);

// Point-cloud and generic CSV helpers used by the pipeline stages.
void write_cloud_csv(const PointCloud& cloud, const std::string& path);
PointCloud read_cloud_csv(const std::string& path);

}  // namespace sonartda
