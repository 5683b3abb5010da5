package fixtures.gate.high;

import java.security.MessageDigest;

// One High finding, no mitigating context.
public class UnsafeDigest {
    public byte[] hash(byte[] content) throws Exception {
        MessageDigest md = MessageDigest.getInstance("MD5");
        byte[] digest = md.digest(content);
        return digest;
    }
}
