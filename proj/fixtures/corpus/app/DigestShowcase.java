package fixtures.app;

import java.security.MessageDigest;

// Deliberately broken hash calls kept around as demo material.
public class DigestShowcase {
    public byte[] shouldRejectMd5(byte[] data) throws Exception {
        MessageDigest md = MessageDigest.getInstance("MD5");
        byte[] out = md.digest(data);
        return out;
    }

    public byte[] shouldRejectSha1(byte[] data) throws Exception {
        MessageDigest md = MessageDigest.getInstance("SHA-1");
        byte[] out = md.digest(data);
        return out;
    }

    public byte[] shouldRejectMd2(byte[] data) throws Exception {
        MessageDigest md = MessageDigest.getInstance("MD2");
        byte[] out = md.digest(data);
        return out;
    }
}
