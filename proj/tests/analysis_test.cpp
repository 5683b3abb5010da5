#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <string>
#include <vector>

#include "cryptolint/analysis.hpp"
#include "cryptolint/automaton.hpp"
#include "cryptolint/cfg.hpp"
#include "cryptolint/java_parser.hpp"
#include "cryptolint/rule_parser.hpp"
#include "oracle/replay_oracle.hpp"

using namespace cryptolint;

namespace {

const char* kSignatureRule = R"(CLASS java.security.Signature
EVENTS
  getInstance = getInstance(algorithm)
  initSign = initSign(key)
  update = update(data)
  sign = sign()
ORDER
  getInstance (initSign update+ sign)+
CONSTRAINTS
  getInstance[0] in {SHA256withRSA, SHA256withECDSA}
REQUIRES
  generatedKey on initSign[0]
ENSURES
  signed on return of sign
)";

const char* kKeyPairGenRule = R"(CLASS java.security.KeyPairGenerator
EVENTS
  getInstance = getInstance(algorithm)
  initialize = initialize(_)
  generateKeyPair = generateKeyPair()
ORDER
  getInstance initialize generateKeyPair
ENSURES
  generatedKey on return of generateKeyPair
)";

const char* kDigestRule = R"(CLASS java.security.MessageDigest
EVENTS
  getInstance = getInstance(algorithm)
  update = update(data)
  digest = digest()
ORDER
  getInstance update+ digest
)";

const char* kCipherRule = R"(CLASS javax.crypto.Cipher
EVENTS
  getInstance = getInstance(algorithm)
  init = init(_, key)
  doFinal = doFinal(data)
ORDER
  getInstance init doFinal
)";

const char* kCipherTransformRule = R"(CLASS javax.crypto.Cipher
EVENTS
  getInstance = getInstance(algorithm)
  init = init(_, key)
  doFinal = doFinal(data)
ORDER
  getInstance init doFinal
CONSTRAINTS
  getInstance[0] algorithm in {AES, RSA}
  getInstance[0] mode in {CBC, GCM, CTR}
  getInstance[0] padding in {PKCS5Padding, NoPadding}
)";

const char* kCipherDenyRule = R"(CLASS javax.crypto.Cipher
EVENTS
  getInstance = getInstance(algorithm)
  init = init(_, key)
  doFinal = doFinal(data)
ORDER
  getInstance init doFinal
CONSTRAINTS
  getInstance[0] not in {"AES/CBC/PKCS5Padding"}
)";

const char* kCipherChainRule = R"(CLASS javax.crypto.Cipher
EVENTS
  getInstance = getInstance(algorithm)
  init = init(_, key)
  doFinal = doFinal(data)
ORDER
  getInstance init doFinal
REQUIRES
  generatedKey on init[1]
ENSURES
  encrypted on return of doFinal
)";

const char* kKeyGenRule = R"(CLASS javax.crypto.KeyGenerator
EVENTS
  getInstance = getInstance(algorithm)
  generateKey = generateKey()
ORDER
  getInstance generateKey
CONSTRAINTS
  getInstance[0] in {AES, HmacSHA256}
ENSURES
  generatedKey on return of generateKey
)";

const char* kMacRule = R"(CLASS javax.crypto.Mac
EVENTS
  getInstance = getInstance(algorithm)
  update = update(data)
  doFinal = doFinal()
ORDER
  getInstance update+ doFinal
REQUIRES
  encrypted on update[0]
)";

const char* kPbeRule = R"(CLASS javax.crypto.spec.PBEKeySpec
EVENTS
  create = new(secret, salt, iterations, _)
  createWeak = new(secret)
  clear = clearPassword()
ORDER
  (create | createWeak) clear
CONSTRAINTS
  create[2] at least 10000
FORBIDDEN
  createWeak
NEVERTYPE
  create[0]
)";

const char* kKeySpecRule = R"(CLASS javax.crypto.spec.SecretKeySpec
EVENTS
  create = new(key, algorithm)
ORDER
  create
CONSTRAINTS
  create[0] in {}
ENSURES
  keyMaterial on this
)";

const char* kRandomRule = R"(CLASS java.security.SecureRandom
EVENTS
  create = new()
  setSeed = setSeed(_)
  next = nextBytes(data)
ORDER
  create next+
CONSTRAINTS
  setSeed[0] in {}
)";

RuleSet rulesFrom(std::vector<const char*> texts) {
    RuleSet rs;
    int i = 0;
    for (const char* t : texts) {
        RuleSpec r = parseRule(t, "inline" + std::to_string(i++) + ".rule");
        rs.rules.emplace(r.className, std::move(r));
    }
    return rs;
}

AnalysisResult analyze(const std::string& java, std::vector<const char*> ruleTexts,
                       int budget = kDefaultPathBudget) {
    CompilationUnitIR unit = parseJava(java, "Test.java");
    return analyzeUnit(unit, rulesFrom(std::move(ruleTexts)), budget);
}

std::vector<Finding> ofType(const AnalysisResult& r, ErrorType t) {
    std::vector<Finding> out;
    for (const auto& f : r.findings)
        if (f.errorType == t) out.push_back(f);
    return out;
}

std::string dump(const AnalysisResult& r) {
    std::string out;
    for (const auto& f : r.findings) {
        out += std::string(errorTypeName(f.errorType)) + " " + f.location.file + ":" +
               std::to_string(f.location.line) + ":" + std::to_string(f.location.column) + " " +
               f.objectVar + " " + f.eventLabel + " " + f.detail + "\n";
    }
    return out;
}

}  // namespace

TEST_CASE("incomplete signing with weak algorithm and unvetted key yields three findings") {
    AnalysisResult r = analyze(R"(public class Signer {
    public void start(PrivateKey key, byte[] data) throws Exception {
        Signature s = Signature.getInstance("DSA");
        s.initSign(key);
        s.update(data);
    }
}
)",
                               {kSignatureRule});

    REQUIRE(r.findings.size() == 3);

    const Finding& ce = r.findings[0];
    CHECK(ce.errorType == ErrorType::ConstraintError);
    CHECK(ce.location.line == 3);
    CHECK(ce.ruleClass == "java.security.Signature");
    CHECK(ce.methodName == "start");
    CHECK(ce.objectVar == "s");
    CHECK(ce.eventLabel == "getInstance");
    CHECK(ce.valueText == "DSA");
    CHECK(ce.constraintKind == "value-in-set");
    CHECK(ce.paramKind == ParamKind::AlgorithmSpec);
    CHECK(ce.detail ==
          "argument 0 of getInstance: \"DSA\" is not in the allowed set "
          "{SHA256withRSA, SHA256withECDSA}");
    CHECK(ce.pathFlags.existsOnAllPaths);
    CHECK_FALSE(ce.pathFlags.loopGuarded);

    const Finding& rp = r.findings[1];
    CHECK(rp.errorType == ErrorType::RequiredPredicateError);
    CHECK(rp.location.line == 4);
    CHECK(rp.predicateName == "generatedKey");
    CHECK(rp.paramKind == ParamKind::Key);
    CHECK(rp.detail == "argument of initSign lacks predicate generatedKey");

    const Finding& io = r.findings[2];
    CHECK(io.errorType == ErrorType::IncompleteOperationError);
    CHECK(io.location.line == 5);
    CHECK(io.eventLabel == "update");
    CHECK(io.missingEvents == std::vector<std::string>{"sign", "update"});
    CHECK(io.detail == "operation never completed; expected sign, update");
}

TEST_CASE("full signing protocol over a generated key pair is clean") {
    AnalysisResult r = analyze(R"(public class Signer {
    public byte[] sign(byte[] data) throws Exception {
        KeyPairGenerator kpg = KeyPairGenerator.getInstance("RSA");
        kpg.initialize(2048);
        KeyPair kp = kpg.generateKeyPair();
        PrivateKey key = kp.getPrivate();
        Signature s = Signature.getInstance("SHA256withRSA");
        s.initSign(key);
        s.update(data);
        return s.sign();
    }
}
)",
                               {kSignatureRule, kKeyPairGenRule});
    CHECK(dump(r) == "");
}

TEST_CASE("digest reachable only through the loop is flagged once, loop-guarded") {
    AnalysisResult r = analyze(R"(public class Hasher {
    public byte[] run(byte[] chunk, int n) throws Exception {
        MessageDigest md = MessageDigest.getInstance("SHA-256");
        int i = 0;
        while (i < n) {
            md.update(chunk);
            i = i + 1;
        }
        return md.digest();
    }
}
)",
                               {kDigestRule});

    REQUIRE(r.findings.size() == 1);
    const Finding& ts = r.findings[0];
    CHECK(ts.errorType == ErrorType::TypestateError);
    CHECK(ts.location.line == 9);
    CHECK(ts.unexpectedEvent == "digest");
    CHECK(ts.objectVar == "md");
    CHECK(ts.detail == "call to digest breaks the expected order (expected update)");
    CHECK_FALSE(ts.pathFlags.existsOnAllPaths);
    CHECK(ts.pathFlags.loopGuarded);
}

TEST_CASE("alias copies drive one shared lifecycle") {
    AnalysisResult r = analyze(R"(public class C {
    void go(Key key, byte[] data) throws Exception {
        Cipher c = Cipher.getInstance("AES");
        Cipher d = c;
        d.init(1, key);
        d.doFinal(data);
    }
}
)",
                               {kCipherRule});
    CHECK(dump(r) == "");
}

TEST_CASE("rebinding the variable abandons the first instance") {
    AnalysisResult r = analyze(R"(public class C {
    void go(Key key, byte[] data) throws Exception {
        Cipher c = Cipher.getInstance("AES");
        c = Cipher.getInstance("AES");
        c.init(1, key);
        c.doFinal(data);
    }
}
)",
                               {kCipherRule});

    REQUIRE(r.findings.size() == 1);
    const Finding& io = r.findings[0];
    CHECK(io.errorType == ErrorType::IncompleteOperationError);
    CHECK(io.location.line == 3);
    CHECK(io.missingEvents == std::vector<std::string>{"init"});
    CHECK(io.pathFlags.existsOnAllPaths);
}

TEST_CASE("an instance returned to the caller is not reported incomplete") {
    AnalysisResult r = analyze(R"(public class Maker {
    public Cipher make() throws Exception {
        Cipher c = Cipher.getInstance("AES");
        return c;
    }
}
)",
                               {kCipherRule});
    CHECK(dump(r) == "");
}

TEST_CASE("forbidden constructor is reported and still advances the order") {
    AnalysisResult r = analyze(R"(public class Pbe {
    public void derive(char[] pw) {
        PBEKeySpec spec = new PBEKeySpec(pw);
        spec.clearPassword();
    }
}
)",
                               {kPbeRule});

    REQUIRE(r.findings.size() == 1);
    const Finding& fm = r.findings[0];
    CHECK(fm.errorType == ErrorType::ForbiddenMethodError);
    CHECK(fm.location.line == 3);
    CHECK(fm.objectVar == "spec");
    CHECK(fm.detail == "call to forbidden method new/1");
    CHECK(fm.pathFlags.existsOnAllPaths);
}

TEST_CASE("iteration count below the bound is flagged, boundary value is not") {
    const char* shape = R"(public class Pbe {
    public void derive(char[] pw, byte[] salt) {
        PBEKeySpec spec = new PBEKeySpec(pw, salt, %COUNT%, 128);
        spec.clearPassword();
    }
}
)";
    auto withCount = [&](const std::string& count) {
        std::string src = shape;
        src.replace(src.find("%COUNT%"), 7, count);
        return analyze(src, {kPbeRule});
    };

    AnalysisResult low = withCount("9999");
    REQUIRE(low.findings.size() == 1);
    CHECK(low.findings[0].errorType == ErrorType::ConstraintError);
    CHECK(low.findings[0].constraintKind == "int-at-least");
    CHECK(low.findings[0].intValue == 9999);
    CHECK(low.findings[0].paramKind == ParamKind::IterationCount);
    CHECK(low.findings[0].detail ==
          "argument 2 of create: 9999 is below the required minimum of 10000");

    CHECK(dump(withCount("10000")) == "");
}

TEST_CASE("password reaching a secret parameter from a String is flagged") {
    const char* publicShape = R"(public class Store {
    public void open(String password, byte[] salt) {
        char[] pw = password.toCharArray();
        PBEKeySpec spec = new PBEKeySpec(pw, salt, 10000, 128);
        spec.clearPassword();
    }
}
)";
    AnalysisResult r = analyze(publicShape, {kPbeRule});
    REQUIRE(r.findings.size() == 1);
    const Finding& nt = r.findings[0];
    CHECK(nt.errorType == ErrorType::NeverTypeOfError);
    CHECK(nt.location.line == 4);
    CHECK(nt.paramKind == ParamKind::Secret);
    CHECK(nt.detail == "argument 0 of create must never originate from a String value");
    CHECK(nt.apiForcedString);  // the public API signature forces the String

    const char* privateShape = R"(public class Store {
    private void open(String password, byte[] salt) {
        char[] pw = password.toCharArray();
        PBEKeySpec spec = new PBEKeySpec(pw, salt, 10000, 128);
        spec.clearPassword();
    }
}
)";
    AnalysisResult rp = analyze(privateShape, {kPbeRule});
    REQUIRE(rp.findings.size() == 1);
    CHECK(rp.findings[0].errorType == ErrorType::NeverTypeOfError);
    CHECK_FALSE(rp.findings[0].apiForcedString);

    const char* literalShape = R"(public class Store {
    public void open(byte[] salt) {
        char[] pw = "hunter2".toCharArray();
        PBEKeySpec spec = new PBEKeySpec(pw, salt, 10000, 128);
        spec.clearPassword();
    }
}
)";
    AnalysisResult rl = analyze(literalShape, {kPbeRule});
    REQUIRE(rl.findings.size() == 1);
    CHECK(rl.findings[0].errorType == ErrorType::NeverTypeOfError);
    CHECK_FALSE(rl.findings[0].apiForcedString);

    const char* charsShape = R"(public class Store {
    public void open(char[] pw, byte[] salt) {
        PBEKeySpec spec = new PBEKeySpec(pw, salt, 10000, 128);
        spec.clearPassword();
    }
}
)";
    CHECK(dump(analyze(charsShape, {kPbeRule})) == "");
}

TEST_CASE("hard-coded key material violates the never-constant rule") {
    AnalysisResult r = analyze(R"(public class Keys {
    public SecretKeySpec make() {
        byte[] raw = "0123456789abcdef".getBytes();
        SecretKeySpec ks = new SecretKeySpec(raw, "AES");
        return ks;
    }
}
)",
                               {kKeySpecRule});

    REQUIRE(r.findings.size() == 1);
    const Finding& ce = r.findings[0];
    CHECK(ce.errorType == ErrorType::ConstraintError);
    CHECK(ce.location.line == 4);
    CHECK(ce.constraintKind == "value-in-set");
    CHECK(ce.detail ==
          "argument 0 of create must not be a hard-coded constant (found constant array)");

    AnalysisResult clean = analyze(R"(public class Keys {
    public SecretKeySpec make(SecureRandom rng) {
        byte[] raw = rng.generateSeed(16);
        SecretKeySpec ks = new SecretKeySpec(raw, "AES");
        return ks;
    }
}
)",
                                   {kKeySpecRule});
    CHECK(dump(clean) == "");
}

TEST_CASE("transformation strings resolve components and jca defaults") {
    const char* shape = R"(public class C {
    void go(Key key, byte[] data) throws Exception {
        Cipher c = Cipher.getInstance(%SPEC%);
        c.init(1, key);
        c.doFinal(data);
    }
}
)";
    auto withSpec = [&](const std::string& spec) {
        std::string src = shape;
        src.replace(src.find("%SPEC%"), 6, "\"" + spec + "\"");
        return analyze(src, {kCipherTransformRule});
    };

    AnalysisResult bare = withSpec("AES");
    REQUIRE(bare.findings.size() == 1);
    CHECK(bare.findings[0].transformationComponent == "mode");
    CHECK(bare.findings[0].valueText == "ECB");
    CHECK(bare.findings[0].constraintKind == "transformation-component-in-set");
    CHECK(bare.findings[0].defaulted == true);
    CHECK(bare.findings[0].detail ==
          "mode ECB (implied by \"AES\") is not in the allowed set {CBC, GCM, CTR}");

    AnalysisResult spelled = withSpec("AES/ECB/PKCS5Padding");
    REQUIRE(spelled.findings.size() == 1);
    CHECK(spelled.findings[0].transformationComponent == "mode");
    CHECK(spelled.findings[0].defaulted == false);
    CHECK(spelled.findings[0].detail == "mode ECB is not in the allowed set {CBC, GCM, CTR}");

    AnalysisResult des = withSpec("DES/CBC/PKCS5Padding");
    REQUIRE(des.findings.size() == 1);
    CHECK(des.findings[0].transformationComponent == "algorithm");
    CHECK(des.findings[0].valueText == "DES");

    // a bare algorithm that itself violates fires the algorithm check (not
    // implied — it was spelled out) and the implied-ECB mode check separately
    AnalysisResult bareDes = withSpec("DES");
    REQUIRE(bareDes.findings.size() == 2);
    CHECK(bareDes.findings[0].transformationComponent == "algorithm");
    CHECK(bareDes.findings[0].defaulted == false);
    CHECK(bareDes.findings[0].detail ==
          "algorithm DES is not in the allowed set {AES, RSA}");
    CHECK(bareDes.findings[1].transformationComponent == "mode");
    CHECK(bareDes.findings[1].defaulted == true);
    CHECK(bareDes.findings[1].detail ==
          "mode ECB (implied by \"DES\") is not in the allowed set {CBC, GCM, CTR}");

    CHECK(dump(withSpec("AES/GCM/NoPadding")) == "");
    CHECK(dump(withSpec("aes/gcm/nopadding")) == "");

    AnalysisResult malformed = withSpec("AES//NoPadding");
    REQUIRE(malformed.findings.size() == 1);
    CHECK(malformed.findings[0].detail ==
          "argument 0 of getInstance: malformed transformation \"AES//NoPadding\"");

    AnalysisResult extra = withSpec("AES/GCM/NoPadding/X");
    REQUIRE(extra.findings.size() == 1);
    CHECK(extra.findings[0].detail ==
          "argument 0 of getInstance: malformed transformation \"AES/GCM/NoPadding/X\"");
}

TEST_CASE("denylisted transformation string is rejected verbatim, case-insensitively") {
    const char* shape = R"(public class C {
    void go(Key key, byte[] data) throws Exception {
        Cipher c = Cipher.getInstance(%SPEC%);
        c.init(1, key);
        c.doFinal(data);
    }
}
)";
    auto withSpec = [&](const std::string& spec) {
        std::string src = shape;
        src.replace(src.find("%SPEC%"), 6, "\"" + spec + "\"");
        return analyze(src, {kCipherDenyRule});
    };

    AnalysisResult hit = withSpec("AES/CBC/PKCS5Padding");
    REQUIRE(hit.findings.size() == 1);
    CHECK(hit.findings[0].constraintKind == "value-not-in-set");
    CHECK(hit.findings[0].detail ==
          "argument 0 of getInstance: \"AES/CBC/PKCS5Padding\" is explicitly disallowed");

    AnalysisResult hitLower = withSpec("aes/cbc/pkcs5padding");
    REQUIRE(hitLower.findings.size() == 1);

    CHECK(dump(withSpec("AES/GCM/NoPadding")) == "");
}

TEST_CASE("weak value assigned on one branch is flagged without all-paths certainty") {
    AnalysisResult r = analyze(R"(public class Chooser {
    public void go(boolean fast, PrivateKey key, byte[] data) throws Exception {
        String alg = "SHA256withRSA";
        if (fast) {
            alg = "MD5withRSA";
        }
        Signature s = Signature.getInstance(alg);
        s.initSign(key);
        s.update(data);
        byte[] out = s.sign();
    }
}
)",
                               {kSignatureRule});

    std::vector<Finding> ces = ofType(r, ErrorType::ConstraintError);
    REQUIRE(ces.size() == 1);
    CHECK(ces[0].valueText == "MD5withRSA");
    CHECK_FALSE(ces[0].pathFlags.existsOnAllPaths);
    CHECK_FALSE(ces[0].pathFlags.loopGuarded);
}

TEST_CASE("values produced by unknown calls stay unresolved") {
    AnalysisResult r = analyze(R"(public class C {
    void go(PrivateKey key, byte[] data) throws Exception {
        Signature s = Signature.getInstance(pickAlgorithm());
        s.initSign(key);
        s.update(data);
        byte[] out = s.sign();
    }
}
)",
                               {kSignatureRule});
    CHECK(ofType(r, ErrorType::ConstraintError).empty());
}

TEST_CASE("a misused generator taints keys and everything derived from them") {
    const char* shape = R"(public class Chain {
    public void run(byte[] data) throws Exception {
        KeyGenerator kg = KeyGenerator.getInstance(%ALG%);
        SecretKey k = kg.generateKey();
        Cipher c = Cipher.getInstance("AES");
        c.init(1, k);
        byte[] ct = c.doFinal(data);
        Mac m = Mac.getInstance("HmacSHA256");
        m.update(ct);
        m.doFinal();
    }
}
)";
    auto withAlg = [&](const std::string& alg) {
        std::string src = shape;
        src.replace(src.find("%ALG%"), 5, "\"" + alg + "\"");
        return analyze(src, {kKeyGenRule, kCipherChainRule, kMacRule});
    };

    AnalysisResult bad = withAlg("DES");
    REQUIRE(bad.findings.size() == 3);
    CHECK(bad.findings[0].errorType == ErrorType::ConstraintError);
    CHECK(bad.findings[0].location.line == 3);
    CHECK(bad.findings[1].errorType == ErrorType::RequiredPredicateError);
    CHECK(bad.findings[1].location.line == 6);
    CHECK(bad.findings[1].detail ==
          "argument of init: predicate generatedKey comes from a misused object");
    CHECK(bad.findings[2].errorType == ErrorType::RequiredPredicateError);
    CHECK(bad.findings[2].location.line == 9);
    CHECK(bad.findings[2].detail ==
          "argument of update: predicate encrypted comes from a misused object");

    CHECK(dump(withAlg("AES")) == "");
}

TEST_CASE("event declared outside the order is checked without order effects") {
    AnalysisResult r = analyze(R"(public class Rng {
    public void fill(byte[] buf) {
        SecureRandom r = new SecureRandom();
        r.setSeed(42);
        r.nextBytes(buf);
    }
}
)",
                               {kRandomRule});

    REQUIRE(r.findings.size() == 1);
    const Finding& ce = r.findings[0];
    CHECK(ce.errorType == ErrorType::ConstraintError);
    CHECK(ce.location.line == 4);
    CHECK(ce.eventLabel == "setSeed");
    CHECK(ce.detail == "argument 0 of setSeed must not be a hard-coded constant (found 42)");
}

TEST_CASE("an order violation stops tracking the instance") {
    AnalysisResult r = analyze(R"(public class H {
    void go(byte[] data) throws Exception {
        MessageDigest md = MessageDigest.getInstance("SHA-256");
        byte[] a = md.digest();
        byte[] b = md.digest();
    }
}
)",
                               {kDigestRule});

    REQUIRE(r.findings.size() == 1);
    CHECK(r.findings[0].errorType == ErrorType::TypestateError);
    CHECK(r.findings[0].location.line == 4);
}

TEST_CASE("instances are tracked independently") {
    AnalysisResult r = analyze(R"(public class H {
    void go(byte[] x) throws Exception {
        MessageDigest a = MessageDigest.getInstance("SHA-256");
        MessageDigest b = MessageDigest.getInstance("SHA-256");
        a.update(x);
        b.update(x);
        byte[] out = a.digest();
    }
}
)",
                               {kDigestRule});

    REQUIRE(r.findings.size() == 1);
    const Finding& io = r.findings[0];
    CHECK(io.errorType == ErrorType::IncompleteOperationError);
    CHECK(io.location.line == 6);
    CHECK(io.objectVar == "b");
    CHECK(io.missingEvents == std::vector<std::string>{"digest", "update"});
}

TEST_CASE("analysis output is deterministic across runs") {
    const char* src = R"(public class Chain {
    public void run(byte[] data) throws Exception {
        KeyGenerator kg = KeyGenerator.getInstance("DES");
        SecretKey k = kg.generateKey();
        Cipher c = Cipher.getInstance("AES");
        c.init(1, k);
        byte[] ct = c.doFinal(data);
        Mac m = Mac.getInstance("HmacSHA256");
        m.update(ct);
        m.doFinal();
    }
}
)";
    std::vector<const char*> rules = {kKeyGenRule, kCipherChainRule, kMacRule};
    std::string first = dump(analyze(src, rules));
    for (int i = 0; i < 5; ++i) CHECK(dump(analyze(src, rules)) == first);
}

TEST_CASE("exhausting the path budget leaves a diagnostic behind") {
    AnalysisResult r = analyze(R"(public class Wide {
    void go(boolean a, boolean b, boolean c, byte[] data) throws Exception {
        MessageDigest md = MessageDigest.getInstance("SHA-256");
        if (a) { md.update(data); } else { md.update(data); }
        if (b) { md.update(data); } else { md.update(data); }
        if (c) { md.update(data); } else { md.update(data); }
        byte[] out = md.digest();
    }
}
)",
                               {kDigestRule}, 4);

    bool sawBudget = false;
    for (const auto& d : r.diagnostics)
        if (d.construct == "path-budget") sawBudget = true;
    CHECK(sawBudget);
}

// ---------------------------------------------------------------------------
// Differential runs against the derivative replay oracle.

namespace {

RuleSpec randomProtocolRule(std::mt19937& rng) {
    RuleSpec r;
    r.className = "crypto.Widget";
    std::uniform_int_distribution<int> arity(0, 2);
    for (std::string l : {"a", "b", "c", "d"}) {
        EventDecl d;
        d.label = l;
        EventPattern p;
        p.methodName = l;
        p.parameterKinds.assign(arity(rng), ParamKind::Wildcard);
        d.patterns.push_back(p);
        r.events.push_back(d);
    }
    r.orderPattern = oracle::randomPattern(rng, 3, {"a", "b", "c"});
    r.automaton = compileOrder(r.orderPattern);
    return r;
}

}  // namespace

TEST_CASE("random cfg methods agree with the derivative replay oracle") {
    std::mt19937 rng(20260815);
    int tsSeen = 0, ioSeen = 0, cleanSeen = 0;

    for (int iter = 0; iter < 300; ++iter) {
        RuleSpec rule = randomProtocolRule(rng);
        oracle::RandomMethodConfig cfg{&rule, {"a", "b", "c", "d"}};
        MethodIR m = oracle::randomMethod(rng, cfg, iter);
        REQUIRE(validateCfg(m).empty());

        std::vector<oracle::ReplaySample> samples = oracle::replayObject(m, rule);
        REQUIRE(!samples.empty());

        CompilationUnitIR unit;
        unit.sourcePath = "random.java";
        unit.className = "R";
        unit.methods.push_back(m);
        RuleSet rs;
        rs.rules.emplace(rule.className, rule);
        AnalysisResult res = analyzeUnit(unit, rs);
        REQUIRE(res.diagnostics.empty());

        bool anyViol = false;
        bool allViol = true;
        bool cleanLoop = false;
        std::set<std::pair<ErrorType, int>> expected;
        for (const auto& s : samples) {
            if (s.kind == oracle::ReplayKind::Clean) {
                allViol = false;
                if (s.tookLoop) cleanLoop = true;
                ++cleanSeen;
            } else {
                anyViol = true;
                ErrorType t = s.kind == oracle::ReplayKind::Typestate
                                  ? ErrorType::TypestateError
                                  : ErrorType::IncompleteOperationError;
                expected.insert({t, s.line});
                (t == ErrorType::TypestateError ? tsSeen : ioSeen) += 1;
            }
        }

        REQUIRE(res.findings.size() == (anyViol ? 1u : 0u));
        if (anyViol) {
            const Finding& f = res.findings[0];
            CHECK(expected.count({f.errorType, f.location.line}) == 1);
            CHECK(f.pathFlags.existsOnAllPaths == allViol);
            CHECK(f.pathFlags.loopGuarded == cleanLoop);
        }
    }

    // the corpus must actually exercise all three outcomes
    CHECK(tsSeen > 20);
    CHECK(ioSeen > 20);
    CHECK(cleanSeen > 20);
}

TEST_CASE("dfa expected labels match derivative-viable symbols") {
    std::mt19937 rng(7);
    const std::vector<std::string> alphabet = {"a", "b", "c"};
    std::uniform_int_distribution<size_t> pick(0, alphabet.size() - 1);

    for (int iter = 0; iter < 200; ++iter) {
        OrderPattern p = oracle::randomPattern(rng, 3, alphabet);
        TypestateAutomaton a = compileOrder(p);

        std::vector<std::string> seq;
        int state = a.initial;
        for (int step = 0; step < 6; ++step) {
            CHECK(a.expectedLabels(state) == oracle::viableNext(p, seq));
            const std::string& sym = alphabet[pick(rng)];
            int next = a.step(state, sym);
            if (next < 0) break;
            state = next;
            seq.push_back(sym);
        }
    }
}
