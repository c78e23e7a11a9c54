#pragma once

#include <string>

namespace conceptmap {

// Lowercases (root locale) and NFC-normalizes a UTF-8 token. All tokens pass
// through here before being matched against embedding vocabularies, so the
// two substrates agree on e.g. precomposed vs decomposed accents.
std::string normalize_token(const std::string& token);

} // namespace conceptmap
