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

#include "polyhub/catalog/dua.hpp"

#include "polyhub/error.hpp"
#include "polyhub/text.hpp"

namespace polyhub::catalog {

namespace {

void require(const std::string& value, const char* field)
{
    if (text::trim(value).empty()) throw Error(Errc::invalid_argument, std::string(field) + " required");
}

std::string or_unspecified(const std::string& value)
{
    return text::trim(value).empty() ? std::string("not specified") : value;
}

std::string sentence(std::string s)
{
    if (!s.empty() && s.back() != '.') s += '.';
    return s;
}

} // namespace

std::string render_dua(const DataUseAgreement& a)
{
    require(a.institution, "institution");
    require(a.data_description, "data_description");
    require(a.duration, "duration");

    std::string doc = "DATA USE AGREEMENT\n\n";

    doc += dua_section_headers[0];
    doc += "\n\n";
    doc += "Dataset: " + sentence(a.data_description) + "\n";
    doc += "Collected: " + or_unspecified(a.collection_date_range) + ".\n";
    doc += "Collection site: " + or_unspecified(a.collection_location) + ".\n\n";

    doc += dua_section_headers[1];
    doc += "\n\n";
    doc += "Recipient institution: " + a.institution + ".\n";
    doc += "Named personnel: " + (a.personnel.empty() ? std::string("none listed") : text::join(a.personnel, "; ")) + ".\n";
    doc += "Agreement term: " + a.duration + ".\n\n";

    doc += dua_section_headers[2];
    doc += "\n\n";
    doc += std::string("De-anonymization attempts: ") + (a.deanonymization_prohibited ? "prohibited" : "not restricted") + ".\n";
    doc += "Technical controls: " + sentence(or_unspecified(a.technical_controls)) + "\n";
    doc += "Publication rule: " + sentence(or_unspecified(a.publication_rule)) + "\n";
    doc += "Retention rule: " + sentence(or_unspecified(a.retention_rule)) + "\n";
    return doc;
}

nlohmann::json dua_to_json(const DataUseAgreement& a)
{
    return {{"institution", a.institution},
            {"data_description", a.data_description},
            {"collection_date_range", a.collection_date_range},
            {"collection_location", a.collection_location},
            {"personnel", a.personnel},
            {"duration", a.duration},
            {"technical_controls", a.technical_controls},
            {"deanonymization_prohibited", a.deanonymization_prohibited},
            {"publication_rule", a.publication_rule},
            {"retention_rule", a.retention_rule}};
}

DataUseAgreement dua_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object()) throw Error(Errc::invalid_argument, "agreement must be a JSON object");
    DataUseAgreement a;
    try {
        a.institution = doc.value("institution", "");
        a.data_description = doc.value("data_description", "");
        a.collection_date_range = doc.value("collection_date_range", "");
        a.collection_location = doc.value("collection_location", "");
        a.personnel = doc.value("personnel", std::vector<std::string>{});
        a.duration = doc.value("duration", "");
        a.technical_controls = doc.value("technical_controls", "");
        a.deanonymization_prohibited = doc.value("deanonymization_prohibited", true);
        a.publication_rule = doc.value("publication_rule", "");
        a.retention_rule = doc.value("retention_rule", "");
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::invalid_argument, std::string("malformed agreement: ") + e.what());
    }
    return a;
}

} // namespace polyhub::catalog
