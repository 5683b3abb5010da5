package fixtures.listing1;

import java.security.PrivateKey;
import java.security.Signature;

// Signs a byte array but never completes the operation; the algorithm is
// outdated and the key is not generated securely.
public class SignByte {
    private byte[] signByte(byte[] dataToSign) {
        byte[] signedBytes;
        Signature s = Signature.getInstance("SHA1WithRSA");
        s.initSign(getPrivateKey());
        s.update(dataToSign);
        // Call to signedBytes = s.sign() missing.
        return signedBytes;
    }

    // Get a PrivateKey object with an insecure key length.
    private PrivateKey getPrivateKey() {
        return shortKey();
    }
}
