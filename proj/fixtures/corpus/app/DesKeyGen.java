package fixtures.app;

import javax.crypto.KeyGenerator;
import javax.crypto.SecretKey;

// Generates keys for a 64-bit block cipher.
public class DesKeyGen {
    public SecretKey legacyKey() throws Exception {
        KeyGenerator generator = KeyGenerator.getInstance("DES");
        SecretKey key = generator.generateKey();
        return key;
    }
}
