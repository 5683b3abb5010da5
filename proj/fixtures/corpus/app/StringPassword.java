package fixtures.app;

import java.security.SecureRandom;
import javax.crypto.spec.PBEKeySpec;

// Keeps the password in a String, which lingers in memory until collected.
public class StringPassword {
    private PBEKeySpec derive() {
        String password = "hunter2";
        char[] chars = password.toCharArray();
        SecureRandom random = new SecureRandom();
        byte[] salt = new byte[16];
        random.nextBytes(salt);
        PBEKeySpec spec = new PBEKeySpec(chars, salt, 310000, 256);
        return spec;
    }
}
