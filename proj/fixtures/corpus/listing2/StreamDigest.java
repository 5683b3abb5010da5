package fixtures.listing2;

import java.io.InputStream;
import java.security.MessageDigest;

// Hashes a stream chunk by chunk; update() only happens when the stream
// yields data, so an empty stream digests nothing.
public class StreamDigest {
    public byte[] digestStream(InputStream inputStream, String algo) throws Exception {
        final MessageDigest md = getMessageDigest(algo);
        final byte[] buffer = new byte[4096];
        int count = 0;
        while ((count = inputStream.read(buffer)) > 0) {
            md.update(buffer, 0, count);
        }
        return md.digest();
    }

    private MessageDigest getMessageDigest(String algo) {
        return MessageDigest.getInstance(algo);
    }
}
