package fixtures.app;

import javax.crypto.spec.IvParameterSpec;

// Reuses one IV for every message.
public class StaticIv {
    public IvParameterSpec iv() {
        String nonce = "abcdef9876543210";
        byte[] ivBytes = nonce.getBytes();
        IvParameterSpec spec = new IvParameterSpec(ivBytes);
        return spec;
    }
}
