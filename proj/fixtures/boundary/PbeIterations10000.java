package fixtures.boundary;

import java.security.SecureRandom;
import javax.crypto.spec.PBEKeySpec;

// Exactly the accepted minimum; no finding expected.
public class PbeIterations10000 {
    public PBEKeySpec derive() {
        char[] password = loadPassword();
        SecureRandom random = new SecureRandom();
        byte[] salt = new byte[16];
        random.nextBytes(salt);
        PBEKeySpec spec = new PBEKeySpec(password, salt, 10000, 256);
        return spec;
    }
}
