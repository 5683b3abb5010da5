package fixtures.app;

import org.bouncycastle.crypto.params.AEADParameters;
import org.bouncycastle.crypto.params.KeyParameter;

// Configures AEAD with a 32-bit authentication tag.
public class ShortGcmTag {
    public AEADParameters params(KeyParameter key, byte[] nonce) {
        AEADParameters parameters = new AEADParameters(key, 32, nonce);
        return parameters;
    }
}
