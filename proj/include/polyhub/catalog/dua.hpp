// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing,
// software distributed under the License is distributed on an
// "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, either express or implied.  See the License for the
// specific language governing permissions and limitations
// under the License.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace polyhub::catalog {

struct DataUseAgreement {
    std::string institution;
    std::string data_description;
    std::string collection_date_range;
    std::string collection_location;
    std::vector<std::string> personnel;
    std::string duration;
    std::string technical_controls;
    bool deanonymization_prohibited = true;
    std::string publication_rule;
    std::string retention_rule;

    bool operator==(const DataUseAgreement&) const = default;
};

/// The three section headings, in document order.
inline constexpr const char* dua_section_headers[3] = {
    "What is the data you're seeking to share?",
    "Where / to whom is the data going?",
    "What controls are there on further release (policy/legal & technical)?",
};

/// Plain-text agreement. Throws Errc::invalid_argument "<field> required"
/// when institution, data_description or duration is blank.
std::string render_dua(const DataUseAgreement& agreement);

nlohmann::json dua_to_json(const DataUseAgreement& agreement);
DataUseAgreement dua_from_json(const nlohmann::json& doc);

} // namespace polyhub::catalog
