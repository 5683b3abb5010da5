package fixtures.app;

import java.security.PublicKey;
import java.security.Signature;

// Verifies signatures produced with an MD5-based scheme.
public class WeakVerifier {
    public boolean check(PublicKey publicKey, byte[] document, byte[] signature) throws Exception {
        Signature verifier = Signature.getInstance("MD5withRSA");
        verifier.initVerify(publicKey);
        verifier.update(document);
        boolean valid = verifier.verify(signature);
        return valid;
    }
}
