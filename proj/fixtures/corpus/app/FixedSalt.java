package fixtures.app;

import javax.crypto.spec.PBEKeySpec;

// Derives keys with the same salt for every user.
public class FixedSalt {
    public PBEKeySpec derive() {
        char[] password = loadPassword();
        String pepper = "0123456789abcdef";
        byte[] salt = pepper.getBytes();
        PBEKeySpec spec = new PBEKeySpec(password, salt, 65536, 256);
        return spec;
    }
}
