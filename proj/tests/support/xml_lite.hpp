#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace testsupport {

// Just enough XML to check the exporter's output: declaration, nested
// elements, double-quoted attributes, self-closing tags, the five
// predefined entities. Throws std::runtime_error on anything malformed.
struct XmlNode {
    std::string tag;
    std::map<std::string, std::string> attrs;
    std::vector<XmlNode> children;

    const XmlNode* first(const std::string& childTag) const;
    std::vector<const XmlNode*> all(const std::string& childTag) const;
    std::string attr(const std::string& name) const;
};

XmlNode parse_xml(const std::string& text);

} // namespace testsupport
