#include "opengloss/normalize.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

namespace opengloss {

namespace {

const icu::Normalizer2& nfc() {
    UErrorCode ec = U_ZERO_ERROR;
    const icu::Normalizer2* inst = icu::Normalizer2::getNFCInstance(ec);
    if (U_FAILURE(ec) || inst == nullptr) {
        throw NormalizationError("ICU NFC normalizer unavailable");
    }
    return *inst;
}

}  // namespace

std::string normalize_lemma_lenient(std::string_view raw) {
    UErrorCode ec = U_ZERO_ERROR;
    icu::UnicodeString input =
        icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int>(raw.size())));
    icu::UnicodeString composed = nfc().normalize(input, ec);
    if (U_FAILURE(ec)) {
        throw NormalizationError("NFC normalization failed");
    }

    // Trim and collapse whitespace runs on the composed form.
    icu::UnicodeString out;
    bool pending_space = false;
    bool seen_content = false;
    for (int32_t i = 0; i < composed.length();) {
        UChar32 cp = composed.char32At(i);
        i += U16_LENGTH(cp);
        if (u_isUWhiteSpace(cp)) {
            pending_space = seen_content;
            continue;
        }
        if (pending_space) {
            out.append(static_cast<UChar32>(' '));
            pending_space = false;
        }
        out.append(cp);
        seen_content = true;
    }

    std::string result;
    out.toUTF8String(result);
    return result;
}

std::string normalize_lemma(std::string_view raw) {
    std::string result = normalize_lemma_lenient(raw);
    if (result.empty()) {
        throw NormalizationError("lemma is empty after normalization");
    }
    return result;
}

std::size_t codepoint_count(std::string_view utf8) {
    std::size_t n = 0;
    for (unsigned char c : utf8) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

std::int64_t count_words(std::string_view text) {
    std::int64_t n = 0;
    bool in_token = false;
    for (char c : text) {
        bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
        if (!ws && !in_token) ++n;
        in_token = !ws;
    }
    return n;
}

bool is_alphabetic(std::string_view utf8) {
    if (utf8.empty()) return false;
    icu::UnicodeString s =
        icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int>(utf8.size())));
    for (int32_t i = 0; i < s.length();) {
        UChar32 cp = s.char32At(i);
        i += U16_LENGTH(cp);
        if (!u_hasBinaryProperty(cp, UCHAR_ALPHABETIC)) return false;
    }
    return true;
}

bool starts_uppercase(std::string_view utf8) {
    if (utf8.empty()) return false;
    icu::UnicodeString s =
        icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int>(utf8.size())));
    if (s.length() == 0) return false;
    return u_hasBinaryProperty(s.char32At(0), UCHAR_UPPERCASE);
}

std::string to_lower(std::string_view utf8) {
    icu::UnicodeString s =
        icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int>(utf8.size())));
    s.toLower();
    std::string result;
    s.toUTF8String(result);
    return result;
}

}  // namespace opengloss
