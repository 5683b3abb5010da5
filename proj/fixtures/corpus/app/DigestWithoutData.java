package fixtures.app;

import java.security.MessageDigest;

// Asks for a digest before any data was passed in.
public class DigestWithoutData {
    public byte[] emptyHash() throws Exception {
        MessageDigest md = MessageDigest.getInstance("SHA-256");
        byte[] hash = md.digest();
        return hash;
    }
}
