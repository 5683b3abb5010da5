package fixtures.app;

import javax.crypto.spec.PBEKeySpec;

// Uses the salt-less PBEKeySpec constructor, so the password is the only input.
public class WeakPbeConstructor {
    public PBEKeySpec describePassword() {
        char[] password = loadPassword();
        PBEKeySpec spec = new PBEKeySpec(password);
        return spec;
    }
}
