#include "metaseal/crypto.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <istream>

#include <openssl/bio.h>
#include <openssl/err.h>
#include <openssl/evp.h>
#include <openssl/pem.h>
#include <openssl/rsa.h>
#include <openssl/x509.h>

#include <sys/stat.h>

namespace metaseal {

namespace {

constexpr std::size_t kHashChunk = 1 << 20;

[[noreturn]] void throw_openssl(const std::string& what)
{
    unsigned long err = ERR_get_error();
    char buf[256] = "unknown OpenSSL error";
    if (err != 0)
        ERR_error_string_n(err, buf, sizeof buf);
    ERR_clear_error();
    throw Error(Errc::crypto, what + " (" + buf + ")");
}

std::string to_hex(const unsigned char* data, std::size_t size)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(size * 2);
    for (std::size_t i = 0; i < size; ++i) {
        out += digits[data[i] >> 4];
        out += digits[data[i] & 0x0f];
    }
    return out;
}

int hex_nibble(char c) noexcept
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    return -1;
}

using BioPtr = std::unique_ptr<BIO, decltype(&BIO_free)>;

std::string bio_to_string(BIO* bio)
{
    char* data = nullptr;
    long size = BIO_get_mem_data(bio, &data);
    return std::string(data, static_cast<std::size_t>(size));
}

std::shared_ptr<EVP_PKEY> share_pkey(EVP_PKEY* raw)
{
    return std::shared_ptr<EVP_PKEY>(raw, &EVP_PKEY_free);
}

// PSS with SHA-256 digest/MGF1 and maximal salt, matching the signing side;
// verification recovers the salt length from the signature.
bool configure_pss(EVP_PKEY_CTX* pctx, bool signing)
{
    if (EVP_PKEY_CTX_set_rsa_padding(pctx, RSA_PKCS1_PSS_PADDING) <= 0)
        return false;
    if (EVP_PKEY_CTX_set_rsa_mgf1_md(pctx, EVP_sha256()) <= 0)
        return false;
    int salt = signing ? RSA_PSS_SALTLEN_MAX : RSA_PSS_SALTLEN_AUTO;
    return EVP_PKEY_CTX_set_rsa_pss_saltlen(pctx, salt) > 0;
}

} // namespace

// -- Digest / Timestamp ---------------------------------------------------------

bool Digest::is_valid_hex(std::string_view hex) noexcept
{
    if (hex.size() != 64)
        return false;
    for (char c : hex)
        if (hex_nibble(c) < 0)
            return false;
    return true;
}

Digest Digest::from_hex(std::string_view hex)
{
    if (!is_valid_hex(hex))
        throw Error(Errc::malformed, "digest must be 64 lowercase hex characters");
    return Digest(std::string(hex));
}

Timestamp Timestamp::now()
{
    static std::atomic<std::uint64_t> last{0};
    auto micros = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::microseconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
    std::uint64_t prev = last.load(std::memory_order_relaxed);
    while (true) {
        std::uint64_t next = micros > prev ? micros : prev;
        if (last.compare_exchange_weak(prev, next, std::memory_order_relaxed))
            return Timestamp(next);
    }
}

bool Timestamp::is_valid_wire(std::string_view wire) noexcept
{
    if (wire.empty() || wire.size() > 20)
        return false;
    for (char c : wire)
        if (c < '0' || c > '9')
            return false;
    if (wire.size() > 1 && wire.front() == '0')
        return false;
    if (wire.size() == 20 && wire > "18446744073709551615")
        return false;
    return true;
}

Timestamp Timestamp::from_wire(std::string_view wire)
{
    if (!is_valid_wire(wire))
        throw Error(Errc::malformed, "timestamp wire form must be a plain decimal: \"" +
                                         std::string(wire) + "\"");
    std::uint64_t value = 0;
    for (char c : wire)
        value = value * 10 + static_cast<std::uint64_t>(c - '0');
    return Timestamp(value);
}

// -- hashing ---------------------------------------------------------------------

Sha256::Sha256() : ctx_(EVP_MD_CTX_new())
{
    if (ctx_ == nullptr)
        throw_openssl("SHA-256 init failed");
    if (EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx_);
        ctx_ = nullptr;
        throw_openssl("SHA-256 init failed");
    }
}

Sha256::~Sha256()
{
    if (ctx_ != nullptr)
        EVP_MD_CTX_free(ctx_);
}

Sha256::Sha256(Sha256&& other) noexcept : ctx_(other.ctx_)
{
    other.ctx_ = nullptr;
}

Sha256& Sha256::operator=(Sha256&& other) noexcept
{
    if (this != &other) {
        if (ctx_ != nullptr)
            EVP_MD_CTX_free(ctx_);
        ctx_ = other.ctx_;
        other.ctx_ = nullptr;
    }
    return *this;
}

void Sha256::update(const void* data, std::size_t size)
{
    if (ctx_ == nullptr)
        throw Error(Errc::crypto, "hasher already finalized");
    if (size != 0 && EVP_DigestUpdate(ctx_, data, size) != 1)
        throw_openssl("SHA-256 update failed");
}

Digest Sha256::finish()
{
    if (ctx_ == nullptr)
        throw Error(Errc::crypto, "hasher already finalized");
    unsigned char out[EVP_MAX_MD_SIZE];
    unsigned int out_len = 0;
    if (EVP_DigestFinal_ex(ctx_, out, &out_len) != 1)
        throw_openssl("SHA-256 final failed");
    EVP_MD_CTX_free(ctx_);
    ctx_ = nullptr;
    return Digest(to_hex(out, out_len));
}

Digest hash_bytes(std::string_view data)
{
    Sha256 hasher;
    hasher.update(data);
    return hasher.finish();
}

Digest hash_stream(std::istream& in)
{
    if (in.bad())
        throw Error(Errc::io, "input stream is not readable");
    Sha256 hasher;
    std::vector<char> buffer(kHashChunk);
    while (in) {
        in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
        auto count = static_cast<std::size_t>(in.gcount());
        if (count == 0)
            break;
        hasher.update(buffer.data(), count);
    }
    if (in.bad())
        throw Error(Errc::io, "stream failed mid-read");
    return hasher.finish();
}

Digest hash_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open())
        throw Error(Errc::io, "cannot open " + path.string() + " for hashing");
    return hash_stream(in);
}

Digest hash_canonical(const Document& doc)
{
    return hash_bytes(canonical_encode(doc));
}

Digest combine_digests(const std::vector<Digest>& parts)
{
    if (parts.empty())
        throw Error(Errc::bad_argument, "combine_digests requires at least one digest");
    Sha256 hasher;
    for (const Digest& part : parts)
        hasher.update(part.hex());
    return hasher.finish();
}

// -- keys ------------------------------------------------------------------------

PublicKey wrap_public_key(EVP_PKEY* raw)
{
    return PublicKey(share_pkey(raw));
}

PrivateKey wrap_private_key(EVP_PKEY* raw)
{
    return PrivateKey(share_pkey(raw));
}

PublicKey PublicKey::from_pem(std::string_view pem)
{
    BioPtr bio(BIO_new_mem_buf(pem.data(), static_cast<int>(pem.size())), &BIO_free);
    EVP_PKEY* raw = PEM_read_bio_PUBKEY(bio.get(), nullptr, nullptr, nullptr);
    if (raw == nullptr)
        throw_openssl("cannot parse public key PEM");
    return wrap_public_key(raw);
}

std::string PublicKey::to_pem() const
{
    BioPtr bio(BIO_new(BIO_s_mem()), &BIO_free);
    if (PEM_write_bio_PUBKEY(bio.get(), pkey_.get()) != 1)
        throw_openssl("cannot encode public key PEM");
    return bio_to_string(bio.get());
}

Digest PublicKey::fingerprint() const
{
    unsigned char* der = nullptr;
    int len = i2d_PUBKEY(pkey_.get(), &der);
    if (len <= 0)
        throw_openssl("cannot DER-encode public key");
    std::string bytes(reinterpret_cast<char*>(der), static_cast<std::size_t>(len));
    OPENSSL_free(der);
    return hash_bytes(bytes);
}

PrivateKey PrivateKey::from_pem(std::string_view pem)
{
    BioPtr bio(BIO_new_mem_buf(pem.data(), static_cast<int>(pem.size())), &BIO_free);
    EVP_PKEY* raw = PEM_read_bio_PrivateKey(bio.get(), nullptr, nullptr, nullptr);
    if (raw == nullptr)
        throw_openssl("cannot parse private key PEM");
    return wrap_private_key(raw);
}

std::string PrivateKey::to_pem() const
{
    BioPtr bio(BIO_new(BIO_s_mem()), &BIO_free);
    if (PEM_write_bio_PKCS8PrivateKey(bio.get(), pkey_.get(), nullptr, nullptr, 0, nullptr,
                                      nullptr) != 1)
        throw_openssl("cannot encode private key PEM");
    return bio_to_string(bio.get());
}

PublicKey PrivateKey::public_key() const
{
    // Round-trip through the SubjectPublicKeyInfo encoding to get a
    // standalone public key object.
    unsigned char* der = nullptr;
    int len = i2d_PUBKEY(pkey_.get(), &der);
    if (len <= 0)
        throw_openssl("cannot derive public key");
    const unsigned char* p = der;
    EVP_PKEY* pub = d2i_PUBKEY(nullptr, &p, len);
    OPENSSL_free(der);
    if (pub == nullptr)
        throw_openssl("cannot derive public key");
    return wrap_public_key(pub);
}

KeyPair generate_key_pair()
{
    EVP_PKEY_CTX* pctx = EVP_PKEY_CTX_new_id(EVP_PKEY_RSA, nullptr);
    if (pctx == nullptr)
        throw_openssl("RSA keygen context failed");
    std::unique_ptr<EVP_PKEY_CTX, decltype(&EVP_PKEY_CTX_free)> ctx(pctx, &EVP_PKEY_CTX_free);
    if (EVP_PKEY_keygen_init(ctx.get()) <= 0 ||
        EVP_PKEY_CTX_set_rsa_keygen_bits(ctx.get(), 2048) <= 0)
        throw_openssl("RSA keygen setup failed");
    EVP_PKEY* raw = nullptr;
    if (EVP_PKEY_keygen(ctx.get(), &raw) <= 0)
        throw_openssl("RSA keygen failed");
    PrivateKey priv = wrap_private_key(raw);
    return KeyPair{priv, priv.public_key()};
}

// -- signatures --------------------------------------------------------------------

std::string Signature::hex() const
{
    return to_hex(bytes.data(), bytes.size());
}

Signature Signature::from_hex(std::string_view hex, std::string algorithm_id)
{
    if (hex.size() % 2 != 0)
        throw Error(Errc::malformed, "signature hex has odd length");
    std::vector<std::uint8_t> bytes;
    bytes.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0)
            throw Error(Errc::malformed, "signature is not lowercase hex");
        bytes.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return Signature{std::move(bytes), std::move(algorithm_id)};
}

Signature sign(std::string_view message, const PrivateKey& key)
{
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                                &EVP_MD_CTX_free);
    EVP_PKEY_CTX* pctx = nullptr;
    if (ctx == nullptr ||
        EVP_DigestSignInit(ctx.get(), &pctx, EVP_sha256(), nullptr, key.handle()) != 1 ||
        !configure_pss(pctx, /*signing=*/true))
        throw_openssl("PSS sign init failed");
    std::size_t sig_len = 0;
    if (EVP_DigestSign(ctx.get(), nullptr, &sig_len,
                       reinterpret_cast<const unsigned char*>(message.data()),
                       message.size()) != 1)
        throw_openssl("PSS sign sizing failed");
    std::vector<std::uint8_t> sig(sig_len);
    if (EVP_DigestSign(ctx.get(), sig.data(), &sig_len,
                       reinterpret_cast<const unsigned char*>(message.data()),
                       message.size()) != 1)
        throw_openssl("PSS sign failed");
    sig.resize(sig_len);
    return Signature{std::move(sig)};
}

bool verify_signature(std::string_view message, const Signature& sig,
                      const PublicKey& key) noexcept
{
    // All failure modes map to false, including malformed inputs.
    if (sig.bytes.empty() || sig.algorithm_id != kAlgorithmId)
        return false;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                                &EVP_MD_CTX_free);
    EVP_PKEY_CTX* pctx = nullptr;
    if (ctx == nullptr ||
        EVP_DigestVerifyInit(ctx.get(), &pctx, EVP_sha256(), nullptr, key.handle()) != 1 ||
        !configure_pss(pctx, /*signing=*/false)) {
        ERR_clear_error();
        return false;
    }
    int rc = EVP_DigestVerify(ctx.get(), sig.bytes.data(), sig.bytes.size(),
                              reinterpret_cast<const unsigned char*>(message.data()),
                              message.size());
    ERR_clear_error();
    return rc == 1;
}

// -- PEM file I/O --------------------------------------------------------------------

void save_private_key_pem(const PrivateKey& key, const std::filesystem::path& path)
{
    std::string pem = key.to_pem();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out.is_open())
        throw Error(Errc::io, "cannot write " + path.string());
    out << pem;
    out.close();
    if (!out)
        throw Error(Errc::io, "write failed for " + path.string());
    ::chmod(path.c_str(), S_IRUSR | S_IWUSR);
}

void save_public_key_pem(const PublicKey& key, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out.is_open())
        throw Error(Errc::io, "cannot write " + path.string());
    out << key.to_pem();
    out.close();
    if (!out)
        throw Error(Errc::io, "write failed for " + path.string());
}

namespace {

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open())
        throw Error(Errc::io, "cannot read " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad())
        throw Error(Errc::io, "read failed for " + path.string());
    return data;
}

} // namespace

PrivateKey load_private_key_pem(const std::filesystem::path& path)
{
    return PrivateKey::from_pem(read_file(path));
}

PublicKey load_public_key_pem(const std::filesystem::path& path)
{
    return PublicKey::from_pem(read_file(path));
}

} // namespace metaseal
