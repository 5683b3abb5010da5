package fixtures.app;

import java.security.SecureRandom;
import javax.crypto.spec.PBEKeySpec;

// Key stretching with far too few rounds.
public class FewIterations {
    public PBEKeySpec derive() {
        char[] password = loadPassword();
        SecureRandom random = new SecureRandom();
        byte[] salt = new byte[16];
        random.nextBytes(salt);
        PBEKeySpec spec = new PBEKeySpec(password, salt, 1000, 256);
        return spec;
    }
}
