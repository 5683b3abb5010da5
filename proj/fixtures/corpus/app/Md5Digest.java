package fixtures.app;

import java.security.MessageDigest;

// Hashes content with MD5.
public class Md5Digest {
    public byte[] hash(byte[] content) throws Exception {
        MessageDigest md = MessageDigest.getInstance("MD5");
        byte[] digest = md.digest(content);
        return digest;
    }
}
