/**
 * @file json_codec.hpp
 * @brief JSON form of series documents (journal lines and API payloads)
 */
#pragma once

#include "curator/index/document.hpp"
#include "curator/index/index.hpp"

#include "json.hpp"

namespace curator::index {

[[nodiscard]] auto document_to_json(const SeriesDocument& doc) -> nlohmann::json;
/// @throws Error invalid_document
[[nodiscard]] auto document_from_json(const nlohmann::json& j) -> SeriesDocument;

[[nodiscard]] auto facets_to_json(const FacetDistribution& dist) -> nlohmann::json;

}  // namespace curator::index
