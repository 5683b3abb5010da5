package fixtures.app;

import javax.crypto.Cipher;

// Two-part transformation strings are rejected by Cipher.getInstance at runtime.
public class MalformedTransformation {
    public Cipher build() throws Exception {
        Cipher cipher = Cipher.getInstance("AES/GCM");
        return cipher;
    }
}
