package fixtures.app;

import javax.crypto.spec.SecretKeySpec;

// Builds a symmetric key from bytes that are baked into the binary.
public class HardcodedKey {
    public SecretKeySpec buildKey() {
        String secret = "sup3rs3cr3t!";
        byte[] keyBytes = secret.getBytes();
        SecretKeySpec keySpec = new SecretKeySpec(keyBytes, "AES");
        return keySpec;
    }
}
