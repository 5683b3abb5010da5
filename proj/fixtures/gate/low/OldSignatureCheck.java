package fixtures.gate.low;

import java.security.PublicKey;
import java.security.Signature;

// One Low finding (outdated signature algorithm), nothing else.
public class OldSignatureCheck {
    public boolean check(PublicKey publicKey, byte[] document, byte[] signature) throws Exception {
        Signature verifier = Signature.getInstance("SHA1WithRSA");
        verifier.initVerify(publicKey);
        verifier.update(document);
        boolean valid = verifier.verify(signature);
        return valid;
    }
}
