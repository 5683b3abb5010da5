package fixtures.gate.clean;

import java.security.MessageDigest;

// Nothing to report.
public class SoundDigest {
    public byte[] hash(byte[] content) throws Exception {
        MessageDigest md = MessageDigest.getInstance("SHA-256");
        byte[] digest = md.digest(content);
        return digest;
    }
}
