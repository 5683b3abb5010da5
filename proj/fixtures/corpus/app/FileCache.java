package fixtures.app;

import java.security.MessageDigest;

// Cache bookkeeping: MD5 is only used to produce entry tags here, not to
// protect anything.
public class FileCache {
    public String computeEtag(byte[] payload) throws Exception {
        MessageDigest md = MessageDigest.getInstance("MD5");
        byte[] raw = md.digest(payload);
        String etag = encode(raw);
        return etag;
    }
}
