#ifndef GCONV_SERIALIZE_HPP
#define GCONV_SERIALIZE_HPP

#include <json.hpp>
#include <string>

#include "gconv/gaussian.hpp"
#include "gconv/optimize.hpp"
#include "gconv/phase_space.hpp"

namespace gconv {

using Json = nlohmann::json;

Json to_json(const FockVector& state);
FockVector fock_vector_from_json(const Json& j);

Json to_json(const GaussianChannel& ch);
GaussianChannel channel_from_json(const Json& j);

Json to_json(const OptResult& r);

Json to_json(const WignerGrid& grid);
std::string wigner_csv(const WignerGrid& grid);

/// Writes text atomically: temp file in the same directory, then rename, so
/// failed runs leave no partial outputs.
void write_file(const std::string& path, const std::string& text);

}  // namespace gconv

#endif
