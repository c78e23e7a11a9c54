#include "conceptmap/text.hpp"

#include "conceptmap/error.hpp"

#include <unicode/unorm2.h>
#include <unicode/ustring.h>

#include <vector>

namespace conceptmap {

std::string normalize_token(const std::string& token) {
    if (token.empty()) return token;

    // Fast path: plain ASCII needs no ICU round trip.
    bool ascii = true;
    for (unsigned char c : token) {
        if (c >= 0x80) {
            ascii = false;
            break;
        }
    }
    if (ascii) {
        std::string out = token;
        for (char& c : out) {
            if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
        }
        return out;
    }

    UErrorCode status = U_ZERO_ERROR;
    std::vector<UChar> utf16(token.size() + 1);
    int32_t len16 = 0;
    u_strFromUTF8(utf16.data(), static_cast<int32_t>(utf16.size()), &len16, token.data(),
                  static_cast<int32_t>(token.size()), &status);
    if (U_FAILURE(status)) throw DataError("invalid UTF-8 token: " + token);

    // "und" = root locale; the default locale would make output
    // environment-dependent.
    std::vector<UChar> lowered(utf16.size() * 2 + 4);
    status = U_ZERO_ERROR;
    int32_t lowered_len = u_strToLower(lowered.data(), static_cast<int32_t>(lowered.size()),
                                       utf16.data(), len16, "und", &status);
    if (U_FAILURE(status)) throw DataError("cannot lowercase token: " + token);

    const UNormalizer2* nfc = unorm2_getNFCInstance(&status);
    std::vector<UChar> normalized(lowered_len * 3 + 4);
    int32_t norm_len = unorm2_normalize(nfc, lowered.data(), lowered_len, normalized.data(),
                                        static_cast<int32_t>(normalized.size()), &status);
    if (U_FAILURE(status)) throw DataError("cannot NFC-normalize token: " + token);

    std::string out(norm_len * 4 + 4, '\0');
    int32_t len8 = 0;
    status = U_ZERO_ERROR;
    u_strToUTF8(out.data(), static_cast<int32_t>(out.size()), &len8, normalized.data(), norm_len,
                &status);
    if (U_FAILURE(status)) throw DataError("cannot encode normalized token: " + token);
    out.resize(len8);
    return out;
}

} // namespace conceptmap
