#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "metaseal/canonical.hpp"
#include "metaseal/errors.hpp"

typedef struct evp_pkey_st EVP_PKEY;
typedef struct evp_md_ctx_st EVP_MD_CTX;

namespace metaseal {

inline constexpr std::string_view kAlgorithmId = "RSA-PSS-SHA256-2048";

/// SHA-256 output as 64 lowercase hex characters.
class Digest {
public:
    static Digest from_hex(std::string_view hex);
    static bool is_valid_hex(std::string_view hex) noexcept;

    const std::string& hex() const noexcept { return hex_; }

    friend bool operator==(const Digest&, const Digest&) = default;
    friend auto operator<=>(const Digest&, const Digest&) = default;

private:
    explicit Digest(std::string hex) : hex_(std::move(hex)) {}
    friend class Sha256;
    std::string hex_;
};

/// Unix epoch microseconds with a fixed decimal wire form ("0", no sign,
/// no leading zeros). All signature inputs embed this wire form.
class Timestamp {
public:
    explicit constexpr Timestamp(std::uint64_t micros) : micros_(micros) {}

    /// System clock, clamped so repeated calls within one process never
    /// decrease.
    static Timestamp now();
    static Timestamp from_wire(std::string_view wire);
    static bool is_valid_wire(std::string_view wire) noexcept;

    std::uint64_t micros() const noexcept { return micros_; }
    std::string wire() const { return std::to_string(micros_); }

    friend bool operator==(const Timestamp&, const Timestamp&) = default;
    friend auto operator<=>(const Timestamp&, const Timestamp&) = default;

private:
    std::uint64_t micros_;
};

/// Incremental SHA-256 for inputs larger than memory.
class Sha256 {
public:
    Sha256();
    ~Sha256();
    Sha256(Sha256&&) noexcept;
    Sha256& operator=(Sha256&&) noexcept;
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    void update(const void* data, std::size_t size);
    void update(std::string_view data) { update(data.data(), data.size()); }

    /// Finalizes and invalidates the hasher.
    Digest finish();

private:
    EVP_MD_CTX* ctx_;
};

Digest hash_bytes(std::string_view data);
Digest hash_stream(std::istream& in);
Digest hash_file(const std::filesystem::path& path);
Digest hash_canonical(const Document& doc);

/// SHA-256 of the concatenated hex forms, in the given order. Order matters;
/// the list must be non-empty.
Digest combine_digests(const std::vector<Digest>& parts);

// -- RSA-PSS-SHA256 over 2048-bit keys ----------------------------------------

class PublicKey {
public:
    static PublicKey from_pem(std::string_view pem);

    std::string to_pem() const;
    /// SHA-256 of the DER SubjectPublicKeyInfo encoding.
    Digest fingerprint() const;

    EVP_PKEY* handle() const noexcept { return pkey_.get(); }

private:
    friend class PrivateKey;
    friend PublicKey wrap_public_key(EVP_PKEY*);
    explicit PublicKey(std::shared_ptr<EVP_PKEY> pkey) : pkey_(std::move(pkey)) {}
    std::shared_ptr<EVP_PKEY> pkey_;
};

class PrivateKey {
public:
    static PrivateKey from_pem(std::string_view pem);

    /// Unencrypted PKCS#8 PEM.
    std::string to_pem() const;
    PublicKey public_key() const;

    EVP_PKEY* handle() const noexcept { return pkey_.get(); }

private:
    friend PrivateKey wrap_private_key(EVP_PKEY*);
    explicit PrivateKey(std::shared_ptr<EVP_PKEY> pkey) : pkey_(std::move(pkey)) {}
    std::shared_ptr<EVP_PKEY> pkey_;
};

struct KeyPair {
    PrivateKey private_key;
    PublicKey public_key;
    std::string algorithm_id{kAlgorithmId};
};

/// Fresh RSA-2048 pair, public exponent 65537.
KeyPair generate_key_pair();

struct Signature {
    std::vector<std::uint8_t> bytes;
    std::string algorithm_id{kAlgorithmId};

    std::string hex() const;
    static Signature from_hex(std::string_view hex, std::string algorithm_id = std::string(kAlgorithmId));
};

/// RSA-PSS-SHA256 with maximal salt. PSS is randomized: two signatures over
/// the same message differ, both verify.
Signature sign(std::string_view message, const PrivateKey& key);

/// True iff sig verifies over message under key. Never throws; malformed
/// input yields false.
bool verify_signature(std::string_view message, const Signature& sig, const PublicKey& key) noexcept;

// -- PEM file I/O --------------------------------------------------------------

/// Private key file is created with owner-only permissions.
void save_private_key_pem(const PrivateKey& key, const std::filesystem::path& path);
void save_public_key_pem(const PublicKey& key, const std::filesystem::path& path);
PrivateKey load_private_key_pem(const std::filesystem::path& path);
PublicKey load_public_key_pem(const std::filesystem::path& path);

} // namespace metaseal
