package fixtures.app;

import java.security.SecureRandom;
import javax.crypto.spec.PBEKeySpec;

// The UI framework hands passwords over as String; the conversion is forced.
public class CredentialPrompt {
    public PBEKeySpec accept(String password) {
        char[] chars = password.toCharArray();
        SecureRandom random = new SecureRandom();
        byte[] salt = new byte[16];
        random.nextBytes(salt);
        PBEKeySpec spec = new PBEKeySpec(chars, salt, 310000, 256);
        return spec;
    }
}
