package fixtures.boundary;

import java.security.SecureRandom;
import javax.crypto.spec.PBEKeySpec;

// One iteration below the accepted minimum.
public class PbeIterations9999 {
    public PBEKeySpec derive() {
        char[] password = loadPassword();
        SecureRandom random = new SecureRandom();
        byte[] salt = new byte[16];
        random.nextBytes(salt);
        PBEKeySpec spec = new PBEKeySpec(password, salt, 9999, 256);
        return spec;
    }
}
